#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "symsdp/sdp.hpp"

namespace symsdp {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Realified block (see the solver) as a dense real matrix.
std::vector<std::vector<double>> real_block(const ComplexMatrix& h, bool cplx) {
  std::size_t m = h.rows(), n = cplx ? 2 * m : m;
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      r[i][j] = h(i, j).real();
      if (cplx) {
        r[i][j + m] = -h(i, j).imag();
        r[i + m][j] = h(i, j).imag();
        r[i + m][j + m] = h(i, j).real();
      }
    }
  return r;
}

}  // namespace

std::string sdpa_string(const BlockSdpProblem& p) {
  p.validate();
  std::vector<std::size_t> blocks;
  std::vector<bool> cplx;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    if (!p.active(i)) continue;
    bool c = false;
    for (const auto& al : p.A)
      for (const auto& x : al[i].data())
        if (x.imag() != 0) c = true;
    blocks.push_back(i);
    cplx.push_back(c);
  }
  std::ostringstream os;
  os << "\"moment relaxation, " << p.num_vars() << " variables, constant " << num(p.b.empty() ? 0.0 : p.b[0]) << "\n";
  os << "\"blocks:";
  for (std::size_t k = 0; k < blocks.size(); ++k) os << " " << p.block_labels[blocks[k]] << (cplx[k] ? "(realified)" : "");
  os << "\n";
  os << p.num_vars() << "\n" << blocks.size() << "\n";
  for (std::size_t k = 0; k < blocks.size(); ++k)
    os << (k ? " " : "") << (cplx[k] ? 2 : 1) * p.block_sizes[blocks[k]];
  os << "\n";
  for (std::size_t l = 1; l <= p.num_vars(); ++l) os << (l > 1 ? " " : "") << num(p.b[l] == 0 ? 0.0 : -p.b[l]);
  os << "\n";
  for (std::size_t l = 0; l <= p.num_vars(); ++l)
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      auto r = real_block(p.A[l][blocks[k]], cplx[k]);
      for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i; j < r.size(); ++j) {
          double v = l == 0 ? -r[i][j] : r[i][j];
          if (v != 0) os << l << " " << k + 1 << " " << i + 1 << " " << j + 1 << " " << num(v) << "\n";
        }
    }
  return os.str();
}

void export_sdpa(const BlockSdpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SdpError("cannot open " + path + " for writing");
  out << sdpa_string(p);
  if (!out) throw SdpError("write to " + path + " failed");
}

SdpaData read_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line, body;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    for (char& c : line)
      if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',') c = ' ';
    body += line + "\n";
  }
  std::istringstream ts(body);
  SdpaData d;
  long m = 0, nb = 0;
  if (!(ts >> m >> nb) || m < 0 || nb < 0) throw SdpError("bad SDPA header");
  d.block_struct.resize(nb);
  for (auto& s : d.block_struct)
    if (!(ts >> s)) throw SdpError("bad SDPA block structure");
  d.c.resize(m);
  for (auto& c : d.c)
    if (!(ts >> c)) throw SdpError("bad SDPA objective");
  d.F.assign(m + 1, {});
  for (auto& fl : d.F)
    for (long s : d.block_struct) {
      std::size_t n = static_cast<std::size_t>(std::labs(s));
      fl.push_back(std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    }
  long l, b, i, j;
  double v;
  while (ts >> l >> b >> i >> j >> v) {
    if (l < 0 || l > m || b < 1 || b > nb) throw SdpError("SDPA entry out of range");
    auto& blk = d.F[l][b - 1];
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > blk.size() || static_cast<std::size_t>(j) > blk.size())
      throw SdpError("SDPA entry index out of range");
    blk[i - 1][j - 1] = v;
    blk[j - 1][i - 1] = v;
  }
  if (!ts.eof()) throw SdpError("trailing garbage in SDPA data");
  return d;
}

}  // namespace symsdp
