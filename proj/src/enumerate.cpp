// Integer points n with B n in a box.
//
// The preimage of a box under B is a parallelepiped P. Fourier-Motzkin
// elimination gives, for each k, the projection of P onto (n_0, ..., n_k), so
// a nested loop over n_0, n_1, ... only ever visits integer prefixes that
// extend to a point of P (up to rounding). For a thin needle-shaped P, as
// produced by g_t with large t, this costs about the needle's length in
// integer steps instead of the volume of its bounding box.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "spiral/error.hpp"
#include "spiral/lattice.hpp"

namespace spiral {

namespace {

std::uint64_t& budget_slot() {
  static std::uint64_t budget = [] {
    if (const char* env = std::getenv("SPIRAL_CANDIDATE_BUDGET")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(100'000'000);
  }();
  return budget;
}

// a . n <= b
struct Constraint {
  std::vector<double> a;
  double b;
};

constexpr std::size_t kMaxConstraints = 20000;
constexpr double kBoxMargin = 1e-9;

bool normalize(Constraint& c) {
  double scale = 0.0;
  for (double x : c.a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return false;
  for (double& x : c.a) x /= scale;
  c.b /= scale;
  return true;
}

void dedupe(std::vector<Constraint>& cs) {
  std::sort(cs.begin(), cs.end(), [](const Constraint& l, const Constraint& r) {
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  });
  std::vector<Constraint> out;
  for (auto& c : cs) {
    if (!out.empty() && out.back().a.size() == c.a.size()) {
      bool same = true;
      for (std::size_t j = 0; j < c.a.size() && same; ++j) {
        same = std::abs(out.back().a[j] - c.a[j]) <= 1e-13;
      }
      if (same) continue;  // sorted by b, so the kept one is the tighter
    }
    out.push_back(std::move(c));
  }
  cs = std::move(out);
}

// Eliminates the last variable of constraints over n_0..n_k.
std::vector<Constraint> eliminate_last(const std::vector<Constraint>& cs) {
  const std::size_t k = cs.front().a.size() - 1;
  std::vector<const Constraint*> pos, neg;
  std::vector<Constraint> out;
  for (const auto& c : cs) {
    const double ak = c.a[k];
    if (ak > 1e-14) {
      pos.push_back(&c);
    } else if (ak < -1e-14) {
      neg.push_back(&c);
    } else {
      Constraint z{{c.a.begin(), c.a.begin() + static_cast<long>(k)}, c.b};
      if (normalize(z)) out.push_back(std::move(z));
    }
  }
  for (const Constraint* p : pos) {
    for (const Constraint* q : neg) {
      const double sp = 1.0 / p->a[k];
      const double sq = -1.0 / q->a[k];
      Constraint c{std::vector<double>(k), p->b * sp + q->b * sq};
      for (std::size_t j = 0; j < k; ++j) c.a[j] = p->a[j] * sp + q->a[j] * sq;
      if (normalize(c)) out.push_back(std::move(c));
    }
  }
  dedupe(out);
  return out;
}

class BoxEnumerator {
 public:
  BoxEnumerator(const Eigen::MatrixXd& basis, const Box& box, std::uint64_t budget)
      : basis_(basis), n_(static_cast<int>(basis.rows())), budget_(budget) {
    if (static_cast<int>(box.lo.size()) != n_ || static_cast<int>(box.hi.size()) != n_) {
      throw Error(ErrorCode::InvalidArgument, "box dimension does not match the lattice");
    }
    lo_.resize(n_);
    hi_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      if (!(box.lo[i] <= box.hi[i]) || !std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i])) {
        throw Error(ErrorCode::InvalidArgument, "box must be bounded with lo <= hi");
      }
      lo_[i] = box.lo[i] - kBoxMargin * std::max(1.0, std::abs(box.lo[i]));
      hi_[i] = box.hi[i] + kBoxMargin * std::max(1.0, std::abs(box.hi[i]));
    }

    // Preimage bounding box: coordinate-wise range of B^{-1} v over the box.
    const Eigen::MatrixXd inv = basis.inverse();
    coord_lo_.assign(n_, 0.0);
    coord_hi_.assign(n_, 0.0);
    for (int k = 0; k < n_; ++k) {
      for (int j = 0; j < n_; ++j) {
        const double a = inv(k, j) * lo_[j];
        const double b = inv(k, j) * hi_[j];
        coord_lo_[k] += std::min(a, b);
        coord_hi_[k] += std::max(a, b);
      }
    }

    // Projections of the parallelepiped lo <= B n <= hi.
    std::vector<Constraint> cs;
    for (int i = 0; i < n_; ++i) {
      Constraint up{std::vector<double>(n_), hi_[i]};
      Constraint down{std::vector<double>(n_), -lo_[i]};
      for (int j = 0; j < n_; ++j) {
        up.a[j] = basis(i, j);
        down.a[j] = -basis(i, j);
      }
      if (normalize(up)) cs.push_back(std::move(up));
      if (normalize(down)) cs.push_back(std::move(down));
    }
    levels_.resize(n_);
    for (int k = n_ - 1; k >= 0; --k) {
      for (const auto& c : cs) {
        if (std::abs(c.a[k]) > 1e-14) levels_[k].push_back(c);
      }
      if (k == 0) break;
      cs = eliminate_last(cs);
      // Past this size the projection is left to the bounding box alone.
      if (cs.empty() || cs.size() > kMaxConstraints) break;
    }
  }

  template <class Visit>
  std::uint64_t run(Visit&& visit) {
    coeffs_.assign(n_, 0);
    v_.resize(n_);
    recurse(0, visit);
    return visited_;
  }

 private:
  template <class Visit>
  void recurse(int k, Visit& visit) {
    double lo = coord_lo_[k];
    double hi = coord_hi_[k];
    for (const auto& c : levels_[k]) {
      double r = c.b;
      for (int j = 0; j < k; ++j) r -= c.a[j] * static_cast<double>(coeffs_[j]);
      const double bound = r / c.a[k];
      if (c.a[k] > 0.0) {
        hi = std::min(hi, bound);
      } else {
        lo = std::max(lo, bound);
      }
    }
    const double pad_lo = 1e-7 * (1.0 + std::abs(lo));
    const double pad_hi = 1e-7 * (1.0 + std::abs(hi));
    const double first = std::ceil(lo - pad_lo);
    const double last = std::floor(hi + pad_hi);
    if (!(first <= last)) return;
    if (last - first > 9.0e15 || std::abs(first) > 9.0e15 || std::abs(last) > 9.0e15) {
      throw Error(ErrorCode::CandidateBudgetExceeded, "enumeration range exceeds 64-bit integers");
    }
    const auto a = static_cast<std::int64_t>(first);
    const auto b = static_cast<std::int64_t>(last);
    visited_ += static_cast<std::uint64_t>(b - a + 1);
    if (visited_ > budget_) {
      throw Error(ErrorCode::CandidateBudgetExceeded,
                  "lattice enumeration exceeded the candidate budget of " +
                      std::to_string(budget_) + " (basis/box pair too ill-conditioned; reduce t)");
    }
    for (std::int64_t x = a; x <= b; ++x) {
      coeffs_[k] = x;
      if (k + 1 < n_) {
        recurse(k + 1, visit);
        continue;
      }
      bool zero = true;
      for (int i = 0; i < n_; ++i) zero = zero && coeffs_[i] == 0;
      if (zero) continue;
      bool inside = true;
      for (int i = 0; i < n_ && inside; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += basis_(i, j) * static_cast<double>(coeffs_[j]);
        v_[i] = s;
        inside = s >= lo_[i] && s <= hi_[i];
      }
      if (inside) visit(std::span<const std::int64_t>(coeffs_), v_);
    }
  }

  const Eigen::MatrixXd& basis_;
  int n_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  std::vector<double> lo_, hi_;
  std::vector<double> coord_lo_, coord_hi_;
  std::vector<std::vector<Constraint>> levels_;
  std::vector<std::int64_t> coeffs_;
  Eigen::VectorXd v_;
};

}  // namespace

std::uint64_t default_candidate_budget() { return budget_slot(); }

void set_default_candidate_budget(std::uint64_t budget) {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "candidate budget must be positive");
  budget_slot() = budget;
}

std::uint64_t for_each_in_box(
    const Lattice& lattice, const Box& box, std::uint64_t budget,
    const std::function<void(std::span<const std::int64_t>, const Eigen::VectorXd&)>& visit) {
  BoxEnumerator e(lattice.basis(), box, budget);
  return e.run(visit);
}

std::vector<LatticePoint> enumerate_in_box(const Lattice& lattice, const Box& box,
                                           std::uint64_t budget) {
  std::vector<LatticePoint> out;
  for_each_in_box(lattice, box, budget,
                  [&](std::span<const std::int64_t> n, const Eigen::VectorXd& v) {
                    out.push_back({{n.begin(), n.end()}, v});
                  });
  return out;
}

}  // namespace spiral
