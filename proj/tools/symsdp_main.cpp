#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "symsdp/certificates.hpp"
#include "symsdp/pipeline.hpp"
#include "symsdp/sdp.hpp"

using namespace symsdp;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInternal = 2 };

// SYMSDP_LOG=info prints stage timings to stderr.
PipelineOptions options_from_env() {
  PipelineOptions opt;
  const char* lvl = std::getenv("SYMSDP_LOG");
  if (lvl && std::string(lvl) != "off" && std::string(lvl) != "") opt.log = [](const std::string& m) { std::cerr << "[symsdp] " << m << "\n"; };
  return opt;
}

int run(const std::string& spec_path, const std::string& cert, const std::string& out) {
  auto opt = options_from_env();
  opt.certificate_path = cert;
  auto report = run_pipeline(read_spec(spec_path), opt);
  std::string text = report.render();
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw SpecError("cannot write " + out);
    f << text;
  }
  if (!report.converged) return kInvalid;
  if (report.verified && !*report.verified) return kInvalid;
  return kOk;
}

int tables(const std::string& spec_path) {
  auto opt = options_from_env();
  opt.solve = false;
  std::cout << run_pipeline(read_spec(spec_path), opt).tables();
  return kOk;
}

int export_sdpa_file(const std::string& spec_path, const std::string& out) {
  auto p = pipeline_problem(read_spec(spec_path));
  export_sdpa(p, out);
  std::size_t active = 0;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) active += p.active(i);
  std::cout << "wrote " << out << ": " << p.num_vars() << " variables, " << active << " blocks\n";
  return kOk;
}

int verify(const std::string& path) {
  Certificate c;
  try {
    c = read_certificate(path);
  } catch (const CertificateParseError& e) {
    std::cout << path << ": " << e.what() << "\nINVALID\n";
    return kInvalid;
  }
  auto r = verify_sos(c.sos, c.objective);
  std::cout << "certificate  " << c.name << "\n";
  std::cout << "mu           " << c.sos.mu.str() << "\n";
  std::cout << "terms        " << c.sos.terms.size() << "\n";
  if (r.valid) {
    std::cout << "VALID\n";
    return kOk;
  }
  std::cout << "INVALID: " << r.difference << "\n";
  return kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric moment/SOS relaxations of Bell inequalities"};
  app.require_subcommand(1);
  std::string spec, out, cert, path;

  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline and print the report");
  run_cmd->add_option("spec", spec, "Problem description (JSON)")->required();
  run_cmd->add_option("--certificate", cert, "Where to write the certificate (exact mode)");
  run_cmd->add_option("-o,--output", out, "Write the report here instead of stdout");

  auto* verify_cmd = app.add_subcommand("verify", "Check a certificate file by exact expansion");
  verify_cmd->add_option("certificate", path, "Certificate file")->required();

  auto* export_cmd = app.add_subcommand("export-sdpa", "Write the (reduced) SDP in sparse SDPA format");
  export_cmd->add_option("spec", spec, "Problem description (JSON)")->required();
  export_cmd->add_option("out", out, "Output .dat-s file")->required();

  auto* tables_cmd = app.add_subcommand("tables", "Print cardinalities and the block table without solving");
  tables_cmd->add_option("spec", spec, "Problem description (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run_cmd) return run(spec, cert, out);
    if (*verify_cmd) return verify(path);
    if (*export_cmd) return export_sdpa_file(spec, out);
    if (*tables_cmd) return tables(spec);
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.invalid_input() ? kInvalid : kInternal;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const CertificateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
