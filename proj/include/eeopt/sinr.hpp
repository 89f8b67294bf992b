// Copyright 2026 The eeopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// SINR models and the difference-of-increasing split of the per-link rate.
//
// Every model writes log2(1 + sinr_k(p)) = q_k^+(p) - q_k^-(p) with q^+ and
// q^- increasing and concave in p. The noise power is normalized to one
// inside the logarithms (all gains are divided by sigma2), so both parts are
// non-negative for any sigma2 > 0 while their difference is unchanged. q^+
// and q^- are in bit/s/Hz; callers multiply by the bandwidth.

#include "eeopt/common.hpp"

#include <variant>
#include <vector>

namespace eeopt {

/// sinr_k = alpha_k p_k / (sigma2 + sum_{i != k} beta(i, k) p_i).
/// beta(i, k) is the gain from transmitter i into receiver k.
struct ScalarSinr {
  Vec alpha;
  Mat beta;
};

/// Adds a self-interference term phi_k p_k to the denominator of ScalarSinr.
struct SelfInterferenceSinr {
  Vec alpha;
  Vec phi;
  Mat beta;
};

/// LMMSE receiver in an r-dimensional vector channel:
/// sinr_k = p_k v_kk^H (sigma2 I + p_k u_k u_k^H + sum_{i != k} p_i v_ki v_ki^H)^{-1} v_kk.
struct VectorLmmseSinr {
  int r = 0;
  std::vector<std::vector<CVec>> v;  ///< v[k][i]: channel from transmitter i to receiver k
  std::vector<CVec> u;               ///< u[k]: self-interference signature of link k
};

class SinrModel {
 public:
  using Params = std::variant<ScalarSinr, SelfInterferenceSinr, VectorLmmseSinr>;

  SinrModel(Params params, double sigma2) : params_(std::move(params)), sigma2_(sigma2) {
    validate();
  }

  const Params& params() const { return params_; }
  double sigma2() const { return sigma2_; }
  std::size_t link_count() const { return k_; }

  bool is_vector() const { return std::holds_alternative<VectorLmmseSinr>(params_); }

 private:
  void validate() {
    require(sigma2_ > 0.0 && std::isfinite(sigma2_), "SinrModel: sigma2 must be positive");
    std::visit([this](const auto& m) { validate_params(m); }, params_);
  }

  static void validate_gains(const Vec& alpha, const Mat& beta) {
    const auto k = alpha.size();
    require(k >= 1, "SinrModel: at least one link required");
    require(beta.rows() == k && beta.cols() == k, "SinrModel: beta must be K x K");
    require((alpha.array() >= 0.0).all(), "SinrModel: alpha must be non-negative");
    require((beta.array() >= 0.0).all(), "SinrModel: beta must be non-negative");
    for (Eigen::Index i = 0; i < k; ++i) {
      require(beta(i, i) == 0.0, "SinrModel: beta diagonal must be zero");
    }
  }

  void validate_params(const ScalarSinr& m) {
    validate_gains(m.alpha, m.beta);
    k_ = static_cast<std::size_t>(m.alpha.size());
  }

  void validate_params(const SelfInterferenceSinr& m) {
    validate_gains(m.alpha, m.beta);
    require(m.phi.size() == m.alpha.size(), "SinrModel: phi must have K entries");
    require((m.phi.array() >= 0.0).all(), "SinrModel: phi must be non-negative");
    k_ = static_cast<std::size_t>(m.alpha.size());
  }

  void validate_params(const VectorLmmseSinr& m) {
    require(m.r >= 1, "SinrModel: receive dimension r must be >= 1");
    require(!m.v.empty(), "SinrModel: at least one link required");
    const auto k = m.v.size();
    require(m.u.size() == k, "SinrModel: u must have K entries");
    for (std::size_t a = 0; a < k; ++a) {
      require(m.v[a].size() == k, "SinrModel: v must be K x K");
      require(m.u[a].size() == m.r, "SinrModel: u_k must have length r");
      for (std::size_t b = 0; b < k; ++b) {
        require(m.v[a][b].size() == m.r, "SinrModel: v_ki must have length r");
      }
    }
    k_ = k;
  }

  Params params_;
  double sigma2_;
  std::size_t k_ = 0;
};

/// Per-link values of both parts of the rate decomposition.
struct RateSplit {
  Vec plus;
  Vec minus;
};

namespace detail {

struct ScalarView {
  const Vec& alpha;
  const Vec* phi;  // null for ScalarSinr
  const Mat& beta;

  double phi_at(Eigen::Index k) const { return phi ? (*phi)(k) : 0.0; }
};

inline ScalarView scalar_view(const ScalarSinr& m) { return {m.alpha, nullptr, m.beta}; }
inline ScalarView scalar_view(const SelfInterferenceSinr& m) { return {m.alpha, &m.phi, m.beta}; }

inline void check_power(const SinrModel& model, const Vec& p) {
  if (static_cast<std::size_t>(p.size()) != model.link_count()) {
    throw InvalidInput("power vector length does not match link count");
  }
}

// Which side of the decomposition a log-det term represents.
enum class Side { kPlus, kMinus };

// Normalized log-det term of link k for the vector model:
//   M = I + (1/sigma2) sum_i p_i sum_f w_if w_if^H,
// where coordinate k carries {u_k} on the minus side and {v_kk, u_k} on the
// plus side. The Cholesky factor is reused for value, gradient and Hessian.
class LogDetTerm {
 public:
  LogDetTerm(const VectorLmmseSinr& m, double sigma2, const Vec& p, Eigen::Index k, Side side)
      : m_(m), sigma2_(sigma2), k_(k), side_(side) {
    const int r = m.r;
    CMat mat = CMat::Identity(r, r);
    const auto kk = static_cast<Eigen::Index>(m.v.size());
    for (Eigen::Index i = 0; i < kk; ++i) {
      for_each_factor(i, [&](const CVec& w) { mat.noalias() += (p(i) / sigma2) * w * w.adjoint(); });
    }
    llt_.compute(mat);
    if (llt_.info() != Eigen::Success) {
      throw NumericalError("log-det term: interference-plus-noise matrix is not positive definite");
    }
  }

  double value() const {
    double acc = 0.0;
    for (int j = 0; j < m_.r; ++j) acc += std::log(std::real(llt_.matrixLLT()(j, j)));
    return 2.0 * acc / kLn2;
  }

  Vec gradient() const {
    const auto kk = static_cast<Eigen::Index>(m_.v.size());
    Vec g(kk);
    for (Eigen::Index i = 0; i < kk; ++i) {
      double acc = 0.0;
      for_each_factor(i, [&](const CVec& w) { acc += whitened(w).squaredNorm(); });
      g(i) = acc / (sigma2_ * kLn2);
    }
    return g;
  }

  Mat hessian() const {
    const auto kk = static_cast<Eigen::Index>(m_.v.size());
    std::vector<std::vector<CVec>> z(kk);
    for (Eigen::Index i = 0; i < kk; ++i) {
      for_each_factor(i, [&](const CVec& w) { z[i].push_back(whitened(w)); });
    }
    Mat h = Mat::Zero(kk, kk);
    for (Eigen::Index a = 0; a < kk; ++a) {
      for (Eigen::Index b = a; b < kk; ++b) {
        double acc = 0.0;
        for (const auto& za : z[a]) {
          for (const auto& zb : z[b]) acc += std::norm(za.dot(zb));
        }
        h(a, b) = h(b, a) = -acc / (sigma2_ * sigma2_ * kLn2);
      }
    }
    return h;
  }

  /// w^H M^{-1} w for the normalized matrix M.
  double quadratic(const CVec& w) const { return whitened(w).squaredNorm(); }

 private:
  CVec whitened(const CVec& w) const { return llt_.matrixL().solve(w); }

  template <class F>
  void for_each_factor(Eigen::Index i, F&& f) const {
    if (i == k_) {
      if (side_ == Side::kPlus) f(m_.v[k_][k_]);
      if (m_.u[k_].squaredNorm() > 0.0) f(m_.u[k_]);
    } else {
      f(m_.v[k_][i]);
    }
  }

  const VectorLmmseSinr& m_;
  double sigma2_;
  Eigen::Index k_;
  Side side_;
  Eigen::LLT<CMat> llt_;
};

// Coefficient vector a such that the normalized scalar log argument is
// 1 + a.p / sigma2 for link k on the requested side.
inline Vec scalar_coefficients(const ScalarView& m, Eigen::Index k, Side side) {
  Vec a = m.beta.col(k);
  a(k) = m.phi_at(k) + (side == Side::kPlus ? m.alpha(k) : 0.0);
  return a;
}

}  // namespace detail

/// Per-link SINR.
inline Vec sinr(const SinrModel& model, const Vec& p) {
  detail::check_power(model, p);
  const double s2 = model.sigma2();
  return std::visit(
      [&](const auto& m) -> Vec {
        using T = std::decay_t<decltype(m)>;
        const auto k = p.size();
        Vec g(k);
        if constexpr (std::is_same_v<T, VectorLmmseSinr>) {
          for (Eigen::Index j = 0; j < k; ++j) {
            detail::LogDetTerm term(m, s2, p, j, detail::Side::kMinus);
            g(j) = p(j) * term.quadratic(m.v[j][j]) / s2;
          }
        } else {
          const auto view = detail::scalar_view(m);
          const Vec interference = view.beta.transpose() * p;
          for (Eigen::Index j = 0; j < k; ++j) {
            g(j) = view.alpha(j) * p(j) / (s2 + view.phi_at(j) * p(j) + interference(j));
          }
        }
        return g;
      },
      model.params());
}

/// Both parts of the rate decomposition at p, in bit/s/Hz.
inline RateSplit rate_split(const SinrModel& model, const Vec& p) {
  detail::check_power(model, p);
  const double s2 = model.sigma2();
  return std::visit(
      [&](const auto& m) -> RateSplit {
        using T = std::decay_t<decltype(m)>;
        const auto k = p.size();
        RateSplit out{Vec(k), Vec(k)};
        if constexpr (std::is_same_v<T, VectorLmmseSinr>) {
          for (Eigen::Index j = 0; j < k; ++j) {
            out.plus(j) = detail::LogDetTerm(m, s2, p, j, detail::Side::kPlus).value();
            out.minus(j) = detail::LogDetTerm(m, s2, p, j, detail::Side::kMinus).value();
          }
        } else {
          const auto view = detail::scalar_view(m);
          const Vec interference = view.beta.transpose() * p;
          for (Eigen::Index j = 0; j < k; ++j) {
            const double base = 1.0 + (view.phi_at(j) * p(j) + interference(j)) / s2;
            out.minus(j) = std::log2(base);
            out.plus(j) = std::log2(base + view.alpha(j) * p(j) / s2);
          }
        }
        return out;
      },
      model.params());
}

inline Vec q_plus(const SinrModel& model, const Vec& p) { return rate_split(model, p).plus; }
inline Vec q_minus(const SinrModel& model, const Vec& p) { return rate_split(model, p).minus; }

namespace detail {

inline Mat grad_side(const SinrModel& model, const Vec& p, Side side) {
  check_power(model, p);
  const double s2 = model.sigma2();
  return std::visit(
      [&](const auto& m) -> Mat {
        using T = std::decay_t<decltype(m)>;
        const auto k = p.size();
        Mat g(k, k);
        if constexpr (std::is_same_v<T, VectorLmmseSinr>) {
          for (Eigen::Index j = 0; j < k; ++j) {
            g.row(j) = LogDetTerm(m, s2, p, j, side).gradient().transpose();
          }
        } else {
          const auto view = scalar_view(m);
          for (Eigen::Index j = 0; j < k; ++j) {
            const Vec a = scalar_coefficients(view, j, side);
            const double denom = s2 + a.dot(p);
            g.row(j) = (a / (denom * kLn2)).transpose();
          }
        }
        return g;
      },
      model.params());
}

inline Mat hess_side(const SinrModel& model, const Vec& p, Eigen::Index link, Side side) {
  check_power(model, p);
  require(link >= 0 && link < p.size(), "hessian: link index out of range");
  const double s2 = model.sigma2();
  return std::visit(
      [&](const auto& m) -> Mat {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, VectorLmmseSinr>) {
          return LogDetTerm(m, s2, p, link, side).hessian();
        } else {
          const auto view = scalar_view(m);
          const Vec a = scalar_coefficients(view, link, side);
          const double denom = s2 + a.dot(p);
          return -(a * a.transpose()) / (denom * denom * kLn2);
        }
      },
      model.params());
}

}  // namespace detail

/// K x K table; row k is the gradient of q_k^- with respect to p.
inline Mat grad_q_minus(const SinrModel& model, const Vec& p) {
  return detail::grad_side(model, p, detail::Side::kMinus);
}

/// K x K table; row k is the gradient of q_k^+ with respect to p.
inline Mat grad_q_plus(const SinrModel& model, const Vec& p) {
  return detail::grad_side(model, p, detail::Side::kPlus);
}

/// Hessian of q_link^+ with respect to p (negative semidefinite).
inline Mat hess_q_plus(const SinrModel& model, const Vec& p, Eigen::Index link) {
  return detail::hess_side(model, p, link, detail::Side::kPlus);
}

/// Hessian of q_link^- with respect to p (negative semidefinite).
inline Mat hess_q_minus(const SinrModel& model, const Vec& p, Eigen::Index link) {
  return detail::hess_side(model, p, link, detail::Side::kMinus);
}

}  // namespace eeopt
