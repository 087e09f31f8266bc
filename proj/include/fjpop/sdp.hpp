#pragma once

// Primal-dual interior-point method for block-diagonal SDPs with free variables
//
//   (P)  min  C.X + cf'u   s.t.  A_i.X + (B u)_i = b_i,  X >= 0
//   (D)  max  b'y          s.t.  C - sum y_i A_i = S >= 0,  B'y = cf
//
// The free variables are eliminated first: dependent columns of B are dropped
// and a pivot subset of the rows is solved for, leaving a standard-form pair
// over the remaining rows. That pair is solved with the HKM direction,
// Mehrotra predictor-corrector and dense Cholesky per block. The scalar type
// is a template parameter; solves that stall in double are repeated in
// long double.

#include "fjpop/relax.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fjpop {

/// Upper-triangle entry (i <= j) of a symmetric block matrix; mirrored when i != j.
struct SymEntry {
  int block;
  int i, j;
  double v;
};

struct SdpInstance {
  /// Positive sizes are dense blocks, negative sizes diagonal (LP) blocks.
  std::vector<int> block_sizes;
  std::vector<SymEntry> C;
  std::vector<std::vector<SymEntry>> A;
  Eigen::VectorXd b;
  Eigen::MatrixXd B;  // m x p, may have no columns
  Eigen::VectorXd cf;

  std::size_t constraints() const noexcept { return A.size(); }
  int total_dimension() const {
    int s = 0;
    for (int n : block_sizes) s += std::abs(n);
    return s;
  }
};

struct SdpOptions {
  double tol = 1e-8;
  int max_iter = 100;
  int dimension_cap = 400;
  double step_fraction = 0.95;
  /// Stop when the merit has not dropped by 10% for this many iterations.
  int stall_iterations = 10;
  int polish_iterations = 4;
  /// Repeat a non-optimal double solve in long double.
  bool extended_fallback = true;
  std::function<void(const std::string&)> trace;  // one line per iteration when set
};

struct SdpResiduals {
  double primal = 0.0;  // ||b - A(X) - Bu|| / (1 + ||b||)
  double dual = 0.0;    // ||C - A*(y) - S, cf - B'y|| / (1 + ||C|| + ||cf||)
  double gap = 0.0;     // |pobj - dobj| / (1 + |pobj| + |dobj|)

  double worst() const { return std::max({primal, dual, gap}); }
};

enum class SdpStatus { optimal, max_iter, infeasible_suspect };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible_suspect: return "infeasible_suspect";
  }
  return "?";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::max_iter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// Objective of the relaxation that was solved (tau_k for a moment problem, rho_k for SOS).
  double value = 0.0;
  std::vector<Eigen::MatrixXd> X;
  std::vector<Eigen::MatrixXd> S;
  Eigen::VectorXd y;
  Eigen::VectorXd u;
  SdpResiduals residuals;
  int iterations = 0;
  bool extended_precision = false;
  std::vector<std::string> log;
};

class SdpError : public std::runtime_error {
 public:
  SdpError(const std::string& what, std::vector<std::string> trace = {})
      : std::runtime_error(what), iteration_trace(std::move(trace)) {}
  std::vector<std::string> iteration_trace;
};

/// Elimination of the free variables u. Columns of B that are dependent at
/// tolerance 1e-10 (rank-revealing QR) are dropped; the rest fix a pivot set
/// P of constraints with y_P = w_P - R y_F on every dual-feasible y. The
/// remaining standard-form problem lives on the free rows F.
struct FreeReduction {
  std::vector<Eigen::Index> keep;   // kept columns of B
  std::vector<Eigen::Index> pivot;  // P
  std::vector<Eigen::Index> rest;   // F
  Eigen::MatrixXd R;                // |P| x |F|
  Eigen::VectorXd w;                // particular solution of B'y = cf, zero on F
  Eigen::MatrixXd Bk;               // kept columns
  bool inconsistent = false;
};

inline FreeReduction reduce_free_variables(const Eigen::MatrixXd& B, const Eigen::VectorXd& cf) {
  using Eigen::Index;
  FreeReduction red;
  const Index m = B.rows();
  red.w = Eigen::VectorXd::Zero(m);
  if (B.cols() == 0) {
    for (Index i = 0; i < m; ++i) red.rest.push_back(i);
    red.R.resize(0, m);
    red.Bk.resize(m, 0);
    return red;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  qr.setThreshold(1e-10);
  const Index r = qr.rank();
  for (Index k = 0; k < r; ++k) red.keep.push_back(qr.colsPermutation().indices()[k]);
  std::sort(red.keep.begin(), red.keep.end());
  red.Bk.resize(m, r);
  Eigen::VectorXd ck(r);
  for (Index k = 0; k < r; ++k) {
    red.Bk.col(k) = B.col(red.keep[k]);
    ck[k] = cf[red.keep[k]];
  }
  if (r < B.cols()) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qk(red.Bk);
    const double scale = 1.0 + cf.lpNorm<Eigen::Infinity>();
    for (Index c = 0; c < B.cols(); ++c) {
      if (std::binary_search(red.keep.begin(), red.keep.end(), c)) continue;
      if (std::abs(cf[c] - qk.solve(B.col(c)).dot(ck)) > 1e-8 * scale) red.inconsistent = true;
    }
  }
  // Pivot rows: the row permutation chosen by a rank-revealing QR of Bk'.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qt(red.Bk.transpose());
  std::vector<bool> is_pivot(static_cast<std::size_t>(m), false);
  for (Index k = 0; k < r; ++k) is_pivot[qt.colsPermutation().indices()[k]] = true;
  for (Index i = 0; i < m; ++i) (is_pivot[i] ? red.pivot : red.rest).push_back(i);
  Eigen::MatrixXd BP(r, r), BF(r, static_cast<Index>(red.rest.size()));
  for (Index k = 0; k < r; ++k) BP.col(k) = red.Bk.row(red.pivot[k]).transpose();
  for (std::size_t k = 0; k < red.rest.size(); ++k) BF.col(static_cast<Index>(k)) = red.Bk.row(red.rest[k]).transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(BP);
  red.R = lu.solve(BF);
  const double drop = 1e-14 * (1.0 + red.R.cwiseAbs().maxCoeff());
  red.R = red.R.unaryExpr([drop](double v) { return std::abs(v) < drop ? 0.0 : v; });
  Eigen::VectorXd wP = lu.solve(ck);
  for (Index k = 0; k < r; ++k) red.w[red.pivot[k]] = wP[k];
  return red;
}

namespace detail {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using BlocksT = std::vector<Mat<T>>;
using Blocks = BlocksT<double>;

template <class T>
T inner(const std::vector<SymEntry>& a, const BlocksT<T>& Z) {
  T s(0);
  for (const auto& e : a) {
    const T v(e.v);
    s += e.i == e.j ? v * Z[e.block](e.i, e.i) : v * (Z[e.block](e.i, e.j) + Z[e.block](e.j, e.i));
  }
  return s;
}

template <class T>
void accumulate(BlocksT<T>& Z, const std::vector<SymEntry>& a, T w) {
  for (const auto& e : a) {
    Z[e.block](e.i, e.j) += w * T(e.v);
    if (e.i != e.j) Z[e.block](e.j, e.i) += w * T(e.v);
  }
}

template <class T>
T dot(const BlocksT<T>& a, const BlocksT<T>& b) {
  T s(0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

template <class T>
T frob(const BlocksT<T>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <class T>
void symmetrize(BlocksT<T>& Z) {
  for (auto& m : Z) m = (T(0.5) * (m + m.transpose())).eval();
}

template <class T>
BlocksT<T> zero_blocks(const std::vector<int>& sizes) {
  BlocksT<T> z;
  for (int s : sizes) z.push_back(Mat<T>::Zero(std::abs(s), std::abs(s)));
  return z;
}

/// Largest step alpha with Z + alpha dZ >= 0 (infinity when unbounded).
template <class T>
T max_step(const BlocksT<T>& Z, const BlocksT<T>& dZ) {
  T alpha = std::numeric_limits<T>::infinity();
  for (std::size_t k = 0; k < Z.size(); ++k) {
    Eigen::LLT<Mat<T>> llt(Z[k]);
    if (llt.info() != Eigen::Success) return T(0);
    Mat<T> W = llt.matrixL().solve(dZ[k]);
    W = llt.matrixL().solve(W.transpose()).transpose();
    W = (T(0.5) * (W + W.transpose())).eval();
    const T lmin = Eigen::SelfAdjointEigenSolver<Mat<T>>(W, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (lmin < 0) alpha = std::min(alpha, T(-1) / lmin);
  }
  return alpha;
}

/// Per constraint and block: the touched rows/cols and the dense restriction.
template <class T>
struct EntryIndex {
  struct Part {
    int block;
    std::vector<int> idx;
    Mat<T> local;
  };
  std::vector<std::vector<Part>> parts;
};

template <class T>
EntryIndex<T> index_entries(const std::vector<std::vector<SymEntry>>& A) {
  EntryIndex<T> ix;
  ix.parts.resize(A.size());
  for (std::size_t c = 0; c < A.size(); ++c) {
    std::map<int, std::vector<const SymEntry*>> per;
    for (const auto& e : A[c]) per[e.block].push_back(&e);
    for (auto& [blk, es] : per) {
      typename EntryIndex<T>::Part part{blk, {}, {}};
      for (auto* e : es) {
        part.idx.push_back(e->i);
        part.idx.push_back(e->j);
      }
      std::sort(part.idx.begin(), part.idx.end());
      part.idx.erase(std::unique(part.idx.begin(), part.idx.end()), part.idx.end());
      const auto t = static_cast<Eigen::Index>(part.idx.size());
      part.local = Mat<T>::Zero(t, t);
      auto pos = [&](int r) {
        return static_cast<Eigen::Index>(std::lower_bound(part.idx.begin(), part.idx.end(), r) - part.idx.begin());
      };
      for (auto* e : es) {
        part.local(pos(e->i), pos(e->j)) += T(e->v);
        if (e->i != e->j) part.local(pos(e->j), pos(e->i)) += T(e->v);
      }
      ix.parts[c].push_back(std::move(part));
    }
  }
  return ix;
}

/// Standard-form pair left after eliminating the free variables.
struct Reduced {
  std::vector<int> sizes;
  std::vector<SymEntry> C;  // includes -A*(w)
  std::vector<std::vector<SymEntry>> A;
  Eigen::VectorXd b;
  double offset = 0.0;  // b'w, added to both objectives
};

inline Reduced reduce(const SdpInstance& inst, const FreeReduction& red) {
  using Eigen::Index;
  Reduced out;
  out.sizes = inst.block_sizes;
  out.b.resize(static_cast<Index>(red.rest.size()));
  for (std::size_t f = 0; f < red.rest.size(); ++f) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const auto& e : inst.A[red.rest[f]]) acc[{e.block, e.i, e.j}] += e.v;
    double bf = inst.b[red.rest[f]];
    for (std::size_t p = 0; p < red.pivot.size(); ++p) {
      const double r = red.R(static_cast<Index>(p), static_cast<Index>(f));
      if (r == 0.0) continue;
      for (const auto& e : inst.A[red.pivot[p]]) acc[{e.block, e.i, e.j}] -= r * e.v;
      bf -= r * inst.b[red.pivot[p]];
    }
    std::vector<SymEntry> row;
    for (const auto& [key, v] : acc)
      if (std::abs(v) > 1e-15) row.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
    out.A.push_back(std::move(row));
    out.b[static_cast<Index>(f)] = bf;
  }
  std::map<std::tuple<int, int, int>, double> cacc;
  for (const auto& e : inst.C) cacc[{e.block, e.i, e.j}] += e.v;
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    const double wi = red.w[static_cast<Index>(i)];
    if (wi == 0.0) continue;
    for (const auto& e : inst.A[i]) cacc[{e.block, e.i, e.j}] -= wi * e.v;
    out.offset += wi * inst.b[static_cast<Index>(i)];
  }
  for (const auto& [key, v] : cacc)
    if (v != 0.0) out.C.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
  return out;
}

template <class T>
struct StandardResult {
  SdpStatus status = SdpStatus::max_iter;
  BlocksT<T> X, S;
  Vec<T> y;
  int iterations = 0;
};

/// Standard-form (P) min C.X s.t. A_i.X = b_i, X >= 0 and its dual.
template <class T>
StandardResult<T> ipm(const Reduced& pr, const SdpOptions& opts, std::vector<std::string>& log) {
  using Eigen::Index;
  using std::abs;
  using std::pow;
  using std::sqrt;
  using M_ = Mat<T>;
  using V_ = Vec<T>;
  const Index m = static_cast<Index>(pr.A.size());
  const std::size_t nb = pr.sizes.size();
  int ntotal = 0;
  for (int s : pr.sizes) ntotal += std::abs(s);

  const auto ix = index_entries<T>(pr.A);
  auto zeros = [&]() { return zero_blocks<T>(pr.sizes); };
  auto Aop = [&](const BlocksT<T>& Z) {
    V_ r(m);
    for (Index i = 0; i < m; ++i) r[i] = inner(pr.A[i], Z);
    return r;
  };
  auto Aadj = [&](const V_& y) {
    BlocksT<T> Z = zeros();
    for (Index i = 0; i < m; ++i)
      if (y[i] != T(0)) accumulate(Z, pr.A[i], y[i]);
    return Z;
  };
  BlocksT<T> C = zeros();
  accumulate(C, pr.C, T(1));
  const V_ b = pr.b.cast<T>();
  const T normb = b.norm();
  const T normC = frob(C);
  const T offset(pr.offset);

  std::vector<T> normA(nb, T(0)), ratio(nb, T(0));
  for (Index i = 0; i < m; ++i) {
    std::vector<T> sq(nb, T(0));
    for (const auto& e : pr.A[i]) sq[e.block] += T(e.i == e.j ? 1.0 : 2.0) * T(e.v) * T(e.v);
    for (std::size_t k = 0; k < nb; ++k) {
      const T nrm = sqrt(sq[k]);
      normA[k] = std::max(normA[k], nrm);
      ratio[k] = std::max(ratio[k], (T(1) + abs(b[i])) / (T(1) + nrm));
    }
  }
  StandardResult<T> res;
  res.X = zeros();
  res.S = zeros();
  for (std::size_t k = 0; k < nb; ++k) {
    const T n(std::abs(pr.sizes[k]));
    res.X[k].diagonal().setConstant(std::max({T(10), sqrt(n), n * ratio[k]}));
    res.S[k].diagonal().setConstant(std::max({T(10), sqrt(n), normA[k], T(C[k].norm())}));
  }
  res.y = V_::Zero(m);
  BlocksT<T>& X = res.X;
  BlocksT<T>& S = res.S;
  V_& y = res.y;

  StandardResult<T> best = res;
  T best_merit = std::numeric_limits<T>::infinity();
  T anchor = best_merit;
  int since_progress = 0;
  int polish = 0;

  for (int iter = 0;; ++iter) {
    res.iterations = iter;
    const V_ Rp = b - Aop(X);
    BlocksT<T> Rd = C;
    {
      const BlocksT<T> AY = Aadj(y);
      for (std::size_t k = 0; k < nb; ++k) Rd[k] -= AY[k] + S[k];
    }
    const T pobj = dot(C, X) + offset;
    const T dobj = b.dot(y) + offset;
    const T pinf = Rp.norm() / (T(1) + normb);
    const T dinf = frob(Rd) / (T(1) + normC);
    const T gap = abs(pobj - dobj) / (T(1) + abs(pobj) + abs(dobj));
    const T mu = dot(X, S) / T(ntotal);
    {
      std::ostringstream line;
      line << "iter " << iter << " pobj " << static_cast<double>(pobj) << " dobj " << static_cast<double>(dobj)
           << " pinf " << static_cast<double>(pinf) << " dinf " << static_cast<double>(dinf) << " gap "
           << static_cast<double>(gap) << " mu " << static_cast<double>(mu);
      log.push_back(line.str());
      if (opts.trace) opts.trace(line.str());
    }
    const T merit = std::max({pinf, dinf, gap});
    if (merit < best_merit) {
      best_merit = merit;
      best = res;
    }
    if (merit < T(0.9) * anchor) {
      anchor = merit;
      since_progress = 0;
    } else {
      ++since_progress;
    }
    // Once within tol, a few more steps usually buy two more digits.
    if (merit <= T(opts.tol) * T(1e-2)) {
      res.status = SdpStatus::optimal;
      return res;
    }
    if (best_merit <= T(opts.tol) && ++polish > opts.polish_iterations) {
      best.status = SdpStatus::optimal;
      return best;
    }
    if (frob(X) > T(1e15) || frob(S) > T(1e15) || y.norm() > T(1e15)) {
      best.status = best_merit <= T(opts.tol) ? SdpStatus::optimal : SdpStatus::infeasible_suspect;
      return best;
    }
    if (iter >= opts.max_iter || since_progress >= opts.stall_iterations) {
      best.status = SdpStatus::max_iter;
      return best;
    }

    BlocksT<T> Sinv(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::LLT<M_> llt(S[k]);
      if (llt.info() != Eigen::Success) {
        log.push_back("Cholesky of S failed at iteration " + std::to_string(iter));
        best.status = SdpStatus::max_iter;
        return best;
      }
      Sinv[k] = llt.solve(M_::Identity(S[k].rows(), S[k].cols()));
      Sinv[k] = (T(0.5) * (Sinv[k] + Sinv[k].transpose())).eval();
    }
    M_ M(m, m);
    {
      BlocksT<T> G = zeros();
      for (Index i = 0; i < m; ++i) {
        for (const auto& part : ix.parts[i]) {
          const auto& Xk = X[part.block];
          const auto& Sk = Sinv[part.block];
          const auto t = static_cast<Index>(part.idx.size());
          M_ XJ(Xk.rows(), t), SJ(t, Sk.cols());
          for (Index a = 0; a < t; ++a) {
            XJ.col(a) = Xk.col(part.idx[a]);
            SJ.row(a) = Sk.row(part.idx[a]);
          }
          G[part.block].noalias() = XJ * part.local * SJ;
        }
        for (Index j = i; j < m; ++j) {
          const T s = inner(pr.A[j], G);
          M(i, j) = s;
          M(j, i) = s;
        }
        for (const auto& part : ix.parts[i]) G[part.block].setZero();
      }
    }
    Eigen::LLT<M_> Mf(M);
    if (Mf.info() != Eigen::Success) {
      M.diagonal().array() += T(1e-14) * (T(1) + M.diagonal().cwiseAbs().maxCoeff());
      Mf.compute(M);
      if (Mf.info() != Eigen::Success) {
        log.push_back("Schur complement factorization failed at iteration " + std::to_string(iter));
        if (iter > 0) {
          best.status = SdpStatus::max_iter;
          return best;
        }
        throw SdpError("Schur complement factorization failed at iteration " + std::to_string(iter), log);
      }
    }

    // Direction for the HKM target T = sigma mu S^-1 - X - corr.
    auto direction = [&](const BlocksT<T>& Tg, BlocksT<T>& dX, V_& dy, BlocksT<T>& dS) {
      BlocksT<T> H(nb);
      for (std::size_t k = 0; k < nb; ++k) H[k] = Tg[k] - X[k] * Rd[k] * Sinv[k];
      symmetrize(H);
      const V_ h = Rp - Aop(H);
      dy = Mf.solve(h);
      dy += Mf.solve(V_(h - M * dy));
      const BlocksT<T> Ady = Aadj(dy);
      dS.resize(nb);
      dX.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        dS[k] = Rd[k] - Ady[k];
        dX[k] = Tg[k] - X[k] * dS[k] * Sinv[k];
      }
      symmetrize(dX);
      symmetrize(dS);
    };

    BlocksT<T> Tg(nb);
    for (std::size_t k = 0; k < nb; ++k) Tg[k] = -X[k];
    BlocksT<T> dXa, dSa;
    V_ dya;
    direction(Tg, dXa, dya, dSa);
    const T ap = std::min(T(1), max_step(X, dXa));
    const T ad = std::min(T(1), max_step(S, dSa));
    T mu_aff(0);
    for (std::size_t k = 0; k < nb; ++k) mu_aff += (X[k] + ap * dXa[k]).cwiseProduct(S[k] + ad * dSa[k]).sum();
    mu_aff /= T(ntotal);
    const T sigma = std::clamp(T(pow(std::max(mu_aff, T(0)) / mu, T(3))), T(0), T(1));

    for (std::size_t k = 0; k < nb; ++k) Tg[k] = sigma * mu * Sinv[k] - X[k] - dXa[k] * dSa[k] * Sinv[k];
    BlocksT<T> dX, dS;
    V_ dy;
    direction(Tg, dX, dy, dS);
    const T sp = std::min(T(1), T(opts.step_fraction) * max_step(X, dX));
    const T sd = std::min(T(1), T(opts.step_fraction) * max_step(S, dS));
    if (sp < T(1e-10) && sd < T(1e-10)) {
      best.status = SdpStatus::max_iter;
      return best;
    }
    for (std::size_t k = 0; k < nb; ++k) {
      X[k] += sp * dX[k];
      S[k] += sd * dS[k];
    }
    y += sd * dy;
  }
}

/// Maps a reduced iterate back to (X, u, y, S) and measures it on the original instance.
template <class T>
void recover(const SdpInstance& inst, const FreeReduction& red, const StandardResult<T>& r, SdpSolution& sol) {
  using Eigen::Index;
  using std::abs;
  const Index m = static_cast<Index>(inst.A.size());
  Vec<T> y = red.w.cast<T>();
  for (std::size_t f = 0; f < red.rest.size(); ++f) y[red.rest[f]] += r.y[static_cast<Index>(f)];
  if (!red.pivot.empty()) {
    const Vec<T> shift = red.R.cast<T>() * r.y;
    for (std::size_t p = 0; p < red.pivot.size(); ++p) y[red.pivot[p]] -= shift[static_cast<Index>(p)];
  }
  const Vec<T> b = inst.b.cast<T>();
  Vec<T> AX(m);
  for (Index i = 0; i < m; ++i) AX[i] = inner(inst.A[i], r.X);
  Vec<T> u = Vec<T>::Zero(inst.B.cols());
  Vec<T> Bu = Vec<T>::Zero(m);
  if (red.Bk.cols() > 0) {
    const Mat<T> Bk = red.Bk.cast<T>();
    const Vec<T> uk = Bk.colPivHouseholderQr().solve(Vec<T>(b - AX));
    for (std::size_t k = 0; k < red.keep.size(); ++k) u[red.keep[k]] = uk[static_cast<Index>(k)];
    Bu = inst.B.cast<T>() * u;
  }
  BlocksT<T> C = zero_blocks<T>(inst.block_sizes);
  accumulate(C, inst.C, T(1));
  BlocksT<T> Rd = C;
  for (Index i = 0; i < m; ++i)
    if (y[i] != T(0)) accumulate(Rd, inst.A[i], T(-y[i]));
  for (std::size_t k = 0; k < Rd.size(); ++k) Rd[k] -= r.S[k];
  const Vec<T> cf = inst.cf.cast<T>();
  const Vec<T> rf = inst.B.cols() > 0 ? Vec<T>(cf - inst.B.cast<T>().transpose() * y) : Vec<T>::Zero(0);
  const T pobj = dot(C, r.X) + cf.dot(u);
  const T dobj = b.dot(y);
  const T normC = frob(C) + T(inst.cf.norm());
  sol.primal_value = static_cast<double>(pobj);
  sol.dual_value = static_cast<double>(dobj);
  sol.residuals.primal = static_cast<double>(Vec<T>(b - AX - Bu).norm() / (T(1) + b.norm()));
  sol.residuals.dual = static_cast<double>(std::sqrt(static_cast<double>(dot(Rd, Rd) + rf.squaredNorm())) /
                                           (1.0 + static_cast<double>(normC)));
  sol.residuals.gap = static_cast<double>(abs(pobj - dobj) / (T(1) + abs(pobj) + abs(dobj)));
  sol.y = y.template cast<double>();
  sol.u = u.template cast<double>();
  sol.X.clear();
  sol.S.clear();
  for (const auto& x : r.X) sol.X.push_back(x.template cast<double>());
  for (const auto& s : r.S) sol.S.push_back(s.template cast<double>());
}

template <class T>
SdpSolution solve_in(const SdpInstance& inst, const FreeReduction& red, const Reduced& pr, const SdpOptions& opts) {
  SdpSolution sol;
  StandardResult<T> r = ipm<T>(pr, opts, sol.log);
  recover(inst, red, r, sol);
  sol.iterations = r.iterations;
  sol.extended_precision = !std::is_same_v<T, double>;
  if (red.inconsistent)
    sol.status = SdpStatus::infeasible_suspect;
  else if (r.status == SdpStatus::infeasible_suspect)
    sol.status = r.status;
  else
    sol.status = sol.residuals.worst() <= opts.tol ? SdpStatus::optimal : SdpStatus::max_iter;
  return sol;
}

}  // namespace detail

inline SdpSolution solve_sdp(const SdpInstance& inst, const SdpOptions& opts = {}) {
  if (inst.total_dimension() > opts.dimension_cap)
    throw SdpError("total block dimension " + std::to_string(inst.total_dimension()) + " exceeds the cap " +
                   std::to_string(opts.dimension_cap));
  const auto m = static_cast<Eigen::Index>(inst.A.size());
  if (inst.b.size() != m || (inst.B.cols() > 0 && inst.B.rows() != m) || inst.B.cols() != inst.cf.size())
    throw std::invalid_argument("solve_sdp: inconsistent instance dimensions");
  const Eigen::MatrixXd B = inst.B.cols() > 0 ? inst.B : Eigen::MatrixXd(m, 0);
  const FreeReduction red = reduce_free_variables(B, inst.cf);
  const detail::Reduced pr = detail::reduce(inst, red);

  SdpSolution sol = detail::solve_in<double>(inst, red, pr, opts);
  if (sol.status == SdpStatus::optimal || !opts.extended_fallback || red.inconsistent) return sol;
  SdpSolution ext = detail::solve_in<long double>(inst, red, pr, opts);
  if (ext.status == SdpStatus::optimal || ext.residuals.worst() < sol.residuals.worst()) {
    ext.log.insert(ext.log.begin(), sol.log.begin(), sol.log.end());
    return ext;
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Relaxation front ends

/// Moment problem as (D): y = moments, S = stacked psd blocks, equalities as free columns.
inline SdpInstance moment_instance(const SdpProblem& sdp) {
  SdpInstance inst;
  const auto m = static_cast<Eigen::Index>(sdp.ybasis.size());
  inst.A.resize(static_cast<std::size_t>(m));
  int blk = 0;
  for (const auto& block : sdp.blocks) {
    if (block.kind != SdpBlock::Kind::psd) continue;
    inst.block_sizes.push_back(static_cast<int>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = i; j < block.size(); ++j)
        for (const auto& [a, c] : block.entries[i][j].terms)
          inst.A[a].push_back({blk, static_cast<int>(i), static_cast<int>(j), -to_double(c)});
    ++blk;
  }
  inst.b = Eigen::VectorXd::Zero(m);
  for (const auto& [a, c] : sdp.objective.terms) inst.b[static_cast<Eigen::Index>(a)] = -to_double(c);
  const auto p = static_cast<Eigen::Index>(1 + sdp.equalities.size());
  inst.B = Eigen::MatrixXd::Zero(m, p);
  inst.cf = Eigen::VectorXd::Zero(p);
  for (const auto& [a, c] : sdp.normalization.terms) inst.B(static_cast<Eigen::Index>(a), 0) = to_double(c);
  inst.cf[0] = 1.0;
  for (std::size_t e = 0; e < sdp.equalities.size(); ++e)
    for (const auto& [a, c] : sdp.equalities[e].terms)
      inst.B(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e + 1)) = to_double(c);
  return inst;
}

/// SOS program as (P): X = Gram blocks, u = (ideal multipliers, xi), one row per monomial.
inline SdpInstance sos_instance(const SosProgram& sos) {
  SdpInstance inst;
  for (const auto& g : sos.gram_blocks) inst.block_sizes.push_back(static_cast<int>(g.basis.size()));
  const auto m = static_cast<Eigen::Index>(sos.equations.size());
  const auto p = static_cast<Eigen::Index>(sos.multiplier_count + 1);
  inst.A.resize(sos.equations.size());
  inst.b = Eigen::VectorXd::Zero(m);
  inst.B = Eigen::MatrixXd::Zero(m, p);
  inst.cf = Eigen::VectorXd::Zero(p);
  inst.cf[p - 1] = -1.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& eq = sos.equations[static_cast<std::size_t>(r)];
    for (const auto& t : eq.gram) {
      double v = to_double(t.coef);
      if (t.i != t.j) v *= 0.5;
      inst.A[r].push_back({static_cast<int>(t.block), static_cast<int>(t.i), static_cast<int>(t.j), v});
    }
    for (const auto& [k, c] : eq.multipliers) inst.B(r, static_cast<Eigen::Index>(k)) += to_double(c);
    inst.B(r, p - 1) = to_double(eq.xi_coef);
    inst.b[r] = to_double(eq.rhs);
  }
  return inst;
}

/// tau_k: value = inf L(f); y holds the moment vector.
inline SdpSolution solve_sdp(const SdpProblem& sdp, const SdpOptions& opts = {}) {
  SdpSolution s = solve_sdp(moment_instance(sdp), opts);
  s.value = -s.dual_value;
  return s;
}

/// rho_k: value = sup xi; X holds the Gram matrices, u the multipliers followed by xi.
inline SdpSolution solve_sdp(const SosProgram& sos, const SdpOptions& opts = {}) {
  SdpSolution s = solve_sdp(sos_instance(sos), opts);
  s.value = -s.primal_value;
  return s;
}

}  // namespace fjpop
