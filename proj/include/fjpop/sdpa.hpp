#pragma once

// SDPA sparse format (.dat-s).
//
//   min c'x  s.t.  F_1 x_1 + ... + F_m x_m - F_0 >= 0
//
// Layout: optional comment lines starting with '*' or '"', then mDIM, nBLOCK,
// the block structure (negative = diagonal), the cost vector c, and one line
// "k b i j v" per nonzero upper-triangle entry of F_k (1-based b, i, j).

#include "fjpop/sdp.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fjpop {

struct SdpaData {
  struct Entry {
    int k, b, i, j;
    double v;
  };
  std::vector<std::string> comments;
  int mdim = 0;
  std::vector<int> block_struct;
  std::vector<double> c;
  std::vector<Entry> entries;
};

/// Shortest decimal form that reads back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

/// Canonical text: entries sorted by (k, b, i, j), duplicates summed, zeros dropped.
inline std::string write_sdpa(const SdpaData& d) {
  std::vector<SdpaData::Entry> es = d.entries;
  for (auto& e : es)
    if (e.i > e.j) std::swap(e.i, e.j);
  std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) {
    return std::tie(a.k, a.b, a.i, a.j) < std::tie(b.k, b.b, b.i, b.j);
  });
  std::vector<SdpaData::Entry> merged;
  for (const auto& e : es) {
    if (!merged.empty() && std::tie(merged.back().k, merged.back().b, merged.back().i, merged.back().j) ==
                               std::tie(e.k, e.b, e.i, e.j))
      merged.back().v += e.v;
    else
      merged.push_back(e);
  }
  std::ostringstream out;
  for (const auto& c : d.comments) out << c << '\n';
  out << d.mdim << '\n' << d.block_struct.size() << '\n';
  for (std::size_t b = 0; b < d.block_struct.size(); ++b) out << (b ? " " : "") << d.block_struct[b];
  out << '\n';
  for (std::size_t i = 0; i < d.c.size(); ++i) out << (i ? " " : "") << format_number(d.c[i]);
  out << '\n';
  for (const auto& e : merged)
    if (e.v != 0.0) out << e.k << ' ' << e.b << ' ' << e.i << ' ' << e.j << ' ' << format_number(e.v) << '\n';
  return out.str();
}

/// Reads .dat-s text. Separators ',', '(', ')', '{', '}' count as blanks.
inline SdpaData parse_sdpa(std::string_view text) {
  SdpaData d;
  std::vector<std::pair<std::string, int>> lines;  // content, 1-based line number
  {
    std::size_t pos = 0;
    int no = 0;
    bool header = true;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line(text.substr(pos, nl - pos));
      ++no;
      pos = nl + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (header && !line.empty() && (line[0] == '*' || line[0] == '"')) {
        d.comments.push_back(line);
        continue;
      }
      for (char& ch : line)
        if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
      if (line.find_first_not_of(" \t") == std::string::npos) {
        if (nl == text.size()) break;
        continue;
      }
      header = false;
      lines.emplace_back(line, no);
      if (nl == text.size()) break;
    }
  }
  std::size_t li = 0;
  auto need = [&](const char* what) -> std::pair<std::string, int>& {
    if (li >= lines.size()) throw ParseError(std::string("SDPA: missing ") + what, static_cast<int>(lines.size()), 1);
    return lines[li++];
  };
  auto tokens = [](const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> t;
    std::string w;
    while (is >> w) t.push_back(w);
    return t;
  };
  auto to_int = [](const std::string& s, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("SDPA: expected an integer, got '" + s + "'", line, 1);
    return v;
  };
  auto to_real = [](const std::string& s, int line) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError("SDPA: expected a number, got '" + s + "'", line, 1);
    return v;
  };

  {
    auto& [l, no] = need("mDIM");
    d.mdim = to_int(tokens(l).front(), no);
  }
  int nblock = 0;
  {
    auto& [l, no] = need("nBLOCK");
    nblock = to_int(tokens(l).front(), no);
  }
  {
    auto& [l, no] = need("block structure");
    auto t = tokens(l);
    if (static_cast<int>(t.size()) < nblock) throw ParseError("SDPA: block structure too short", no, 1);
    for (int b = 0; b < nblock; ++b) d.block_struct.push_back(to_int(t[b], no));
  }
  while (static_cast<int>(d.c.size()) < d.mdim) {
    auto& [l, no] = need("cost vector");
    for (const auto& t : tokens(l)) {
      if (static_cast<int>(d.c.size()) == d.mdim) break;
      d.c.push_back(to_real(t, no));
    }
  }
  while (li < lines.size()) {
    auto& [l, no] = lines[li++];
    auto t = tokens(l);
    if (t.size() < 5) throw ParseError("SDPA: entry lines need 5 fields", no, 1);
    SdpaData::Entry e{to_int(t[0], no), to_int(t[1], no), to_int(t[2], no), to_int(t[3], no), to_real(t[4], no)};
    if (e.k < 0 || e.k > d.mdim) throw ParseError("SDPA: matrix index out of range", no, 1);
    if (e.b < 1 || e.b > nblock) throw ParseError("SDPA: block index out of range", no, 1);
    const int n = std::abs(d.block_struct[e.b - 1]);
    if (e.i < 1 || e.j < 1 || e.i > n || e.j > n) throw ParseError("SDPA: entry outside its block", no, 1);
    if (d.block_struct[e.b - 1] < 0 && e.i != e.j) throw ParseError("SDPA: off-diagonal entry in a diagonal block", no, 1);
    if (e.i > e.j) std::swap(e.i, e.j);
    d.entries.push_back(e);
  }
  return d;
}

/// The SDPA problem as an SdpInstance: max -c'x s.t. -F_0 + sum x_i F_i >= 0.
inline SdpInstance sdpa_instance(const SdpaData& d) {
  SdpInstance inst;
  inst.block_sizes = d.block_struct;
  inst.A.resize(static_cast<std::size_t>(d.mdim));
  inst.b = Eigen::VectorXd::Zero(d.mdim);
  for (int i = 0; i < d.mdim; ++i) inst.b[i] = -d.c[static_cast<std::size_t>(i)];
  inst.B.resize(d.mdim, 0);
  inst.cf.resize(0);
  for (const auto& e : d.entries) {
    SymEntry s{e.b - 1, e.i - 1, e.j - 1, -e.v};
    if (e.k == 0)
      inst.C.push_back(s);
    else
      inst.A[static_cast<std::size_t>(e.k - 1)].push_back(s);
  }
  return inst;
}

/// Inverse of sdpa_instance for instances without free variables.
inline SdpaData to_sdpa(const SdpInstance& inst) {
  if (inst.B.cols() > 0) throw std::invalid_argument("SDPA export needs an instance without free variables");
  SdpaData d;
  d.mdim = static_cast<int>(inst.A.size());
  d.block_struct = inst.block_sizes;
  for (Eigen::Index i = 0; i < inst.b.size(); ++i) d.c.push_back(inst.b[i] == 0.0 ? 0.0 : -inst.b[i]);
  auto put = [&](int k, const SymEntry& e) {
    if (e.v != 0.0) d.entries.push_back({k, e.block + 1, e.i + 1, e.j + 1, -e.v});
  };
  for (const auto& e : inst.C) put(0, e);
  for (std::size_t i = 0; i < inst.A.size(); ++i)
    for (const auto& e : inst.A[i]) put(static_cast<int>(i) + 1, e);
  return d;
}

/// Optimal value of an SDPA problem solved with the built-in solver (min c'x).
inline SdpSolution solve_sdpa(const SdpaData& d, const SdpOptions& opts = {}) {
  SdpSolution s = solve_sdp(sdpa_instance(d), opts);
  s.value = -s.dual_value;
  return s;
}

/// Moment relaxation in SDPA form. The normalization and the zero-block
/// equalities are eliminated exactly (reduced row echelon form over Q, pivots
/// on the lowest moment index); the remaining moments are the SDPA variables
/// in ascending monomial order. The constant part of the objective is
/// recorded in a comment line.
inline SdpaData to_sdpa(const SdpProblem& sdp) {
  const std::size_t m = sdp.ybasis.size();
  // Rows [coeffs | rhs] of the equality system.
  std::vector<std::vector<Rational>> rows;
  auto add_row = [&](const LinearFunctional& lf, const Rational& rhs) {
    std::vector<Rational> r(m + 1, Rational(0));
    for (const auto& [a, c] : lf.terms) r[a] = c;
    r[m] = rhs;
    rows.push_back(std::move(r));
  };
  add_row(sdp.normalization, Rational(1));
  for (const auto& e : sdp.equalities) add_row(e, Rational(0));

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m && rank < rows.size(); ++col) {
    std::size_t sel = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    const Rational inv = Rational(1) / rows[rank][col];
    for (auto& v : rows[rank])
      if (v != 0) v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational f = rows[r][col];
      for (std::size_t c = col; c <= m; ++c)
        if (rows[rank][c] != 0) rows[r][c] -= f * rows[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (rows[r][m] != 0) throw std::invalid_argument("moment equalities are inconsistent");

  // y_p = rhs_p - sum_f R_pf y_f for each pivot p; free moments become x_1..x_mdim.
  std::vector<long> var_of(m, -1);
  std::vector<bool> is_pivot(m, false);
  for (auto p : pivot_col) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t a = 0; a < m; ++a)
    if (!is_pivot[a]) {
      var_of[a] = static_cast<long>(free_cols.size()) + 1;
      free_cols.push_back(a);
    }
  // Expansion of every moment as constant + sum over free variables.
  auto expand = [&](const LinearFunctional& lf, Rational& constant, std::map<long, Rational>& coef) {
    for (const auto& [a, c] : lf.terms) {
      if (!is_pivot[a]) {
        coef[var_of[a]] += c;
        continue;
      }
      const std::size_t r = static_cast<std::size_t>(std::find(pivot_col.begin(), pivot_col.end(), a) - pivot_col.begin());
      constant += c * rows[r][m];
      for (auto f : free_cols)
        if (rows[r][f] != 0) coef[var_of[f]] -= c * rows[r][f];
    }
  };

  SdpaData d;
  d.mdim = static_cast<int>(free_cols.size());
  Rational obj_const(0);
  std::map<long, Rational> obj;
  expand(sdp.objective, obj_const, obj);
  d.c.assign(free_cols.size(), 0.0);
  for (const auto& [v, c] : obj) d.c[static_cast<std::size_t>(v - 1)] = to_double(c);
  d.comments.push_back("* moment relaxation of order " + std::to_string(sdp.order) + ", objective offset " +
                       to_string(obj_const));
  int b = 0;
  for (const auto& block : sdp.blocks) {
    if (block.kind != SdpBlock::Kind::psd) continue;
    ++b;
    d.block_struct.push_back(static_cast<int>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = i; j < block.size(); ++j) {
        Rational constant(0);
        std::map<long, Rational> coef;
        expand(block.entries[i][j], constant, coef);
        const int bi = static_cast<int>(i) + 1, bj = static_cast<int>(j) + 1;
        if (constant != 0) d.entries.push_back({0, b, bi, bj, -to_double(constant)});
        for (const auto& [v, c] : coef)
          if (c != 0) d.entries.push_back({static_cast<int>(v), b, bi, bj, to_double(c)});
      }
  }
  return d;
}

inline std::string export_sdpa(const SdpProblem& sdp) { return write_sdpa(to_sdpa(sdp)); }
inline std::string export_sdpa(const SdpInstance& inst) { return write_sdpa(to_sdpa(inst)); }

/// Objective constant recorded by to_sdpa, or 0 when absent.
inline double sdpa_offset(const SdpaData& d) {
  const std::string key = "objective offset ";
  for (const auto& c : d.comments) {
    auto p = c.find(key);
    if (p != std::string::npos) return to_double(parse_rational(c.substr(p + key.size())));
  }
  return 0.0;
}

}  // namespace fjpop
