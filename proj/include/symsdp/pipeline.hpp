#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symsdp/certificates.hpp"
#include "symsdp/scenarios.hpp"

namespace symsdp {

// Error raised by a pipeline step; what() starts with "<stage>: ".
class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& stage, const std::string& msg, bool invalid_input)
      : std::runtime_error(stage + ": " + msg), stage_(stage), invalid_(invalid_input) {}
  const std::string& stage() const { return stage_; }
  // Bad input or unsupported request, as opposed to an internal failure.
  bool invalid_input() const { return invalid_; }

 private:
  std::string stage_;
  bool invalid_;
};

// Invalid problem description (bad JSON, unknown names, wrong types).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relabelling generator: party, setting and outcome maps (see relabeling_matrix).
struct RelabelingSpec {
  std::vector<int> parties;
  std::vector<std::vector<int>> settings;
  std::vector<std::vector<std::vector<int>>> outcomes;
  bool operator==(const RelabelingSpec&) const = default;
};

// Irrep given by exact generator images, entries as scalar strings.
struct IrrepSpec {
  std::string label;
  std::vector<std::vector<std::vector<std::string>>> generators;
  bool operator==(const IrrepSpec&) const = default;
};

struct ProblemSpec {
  // Builtin ("chsh", "cglmp:d", "sliwa:n") or explicit outcomes + objective.
  std::string scenario;
  std::vector<std::vector<int>> outcomes;
  std::string objective;
  std::string level = "1";
  // "none", "dihedral-<8d>" (the CGLMP group) or explicit relabellings.
  std::string group = "none";
  std::vector<RelabelingSpec> relabelings;
  // "auto" (dihedral for the dihedral group), "dihedral", "abelian:<orders>" or explicit.
  std::string irreps = "auto";
  std::vector<IrrepSpec> irrep_list;
  std::string mode = "numeric";  // numeric | exact
  std::vector<std::uint64_t> tower;  // radicands hint for rounding
  bool tower_imaginary = false;
  long denom_bound = 64;
  double tol = 1e-9;
  double tol_rank = 1e-7;
  std::string realization;  // "" or "cglmp-optimal"
  std::vector<std::size_t> keep_blocks;  // 1-based block indices; empty keeps all
  std::string certificate;  // output path for exact mode
  bool operator==(const ProblemSpec&) const = default;
};

ProblemSpec parse_spec(const std::string& json_text);
ProblemSpec read_spec(const std::string& path);
std::string print_spec(const ProblemSpec& s);

struct BlockRow {
  std::string label;
  std::size_t dim = 0, multiplicity = 0;
  int rank_z = -1, rank_x = -1;
};

struct Report {
  std::string name, level, group_desc, mode;
  std::size_t group_order = 1;
  std::size_t q_size = 0, m_size = 0, m_tilde = 0;
  std::vector<BlockRow> blocks;
  bool solved = false;
  std::string status, message;
  bool converged = false;
  double primal = 0, dual = 0, gap = 0, primal_residual = 0, dual_residual = 0;
  int iterations = 0;
  bool lp_exact = false;
  std::optional<Scalar> dual_exact;
  std::vector<std::size_t> keep_blocks;
  std::optional<double> masked_value;
  std::string rank_warning;
  // exact mode
  std::optional<Scalar> mu;
  std::string certificate_path;
  std::size_t certificate_terms = 0;
  std::optional<bool> verified;
  std::string verify_detail;

  // Cardinalities and the block table only.
  std::string tables() const;
  std::string render() const;
};

struct PipelineOptions {
  bool solve = true;
  std::string certificate_path;  // overrides spec.certificate
  std::function<void(const std::string&)> log;
};

Report run_pipeline(const ProblemSpec& spec, const PipelineOptions& opt = {});

// The SDP the pipeline would solve (symmetrized, masked, conjugation-reduced when
// unsymmetrized and applicable).
BlockSdpProblem pipeline_problem(const ProblemSpec& spec);

}  // namespace symsdp
