#include "campana/enumerate.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "campana/arith.hpp"
#include "campana/kernels.hpp"
#include "campana/parallel.hpp"

namespace campana::enumerate {

const char* method_name(Method m) {
  switch (m) {
    case Method::FullScan: return "full-scan";
    case Method::MeetInTheMiddle: return "meet-in-the-middle";
    case Method::HistogramConvolution: return "histogram-convolution";
  }
  return "unknown";
}

namespace {

/// One coordinate: candidate equation terms and |x| for the gcd filter.
struct Axis {
  std::vector<i128> term;
  std::vector<std::int64_t> coord;
};

u128 saturating_product(std::span<const std::uint64_t> sizes, const std::vector<bool>& mask, bool side) {
  u128 p = 1;
  const u128 cap = static_cast<u128>(1) << 100;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (mask[i] != side) continue;
    p *= sizes[i];
    if (p > cap) return cap;
  }
  return p;
}

std::vector<std::uint64_t> axis_sizes(const std::vector<Axis>& axes) {
  std::vector<std::uint64_t> sizes;
  for (const auto& a : axes) sizes.push_back(a.term.size());
  return sizes;
}

void check_ops(u128 ops, const Budget& budget, const char* what) {
  if (ops > budget.max_ops)
    throw BudgetExceeded(std::string(what) + ": " + to_string(ops) + " operations exceed budget of " +
                         std::to_string(budget.max_ops));
}

// ---- full scan --------------------------------------------------------------

struct ScanState {
  const std::vector<Axis>& axes;
  bool primitive;
  std::uint64_t count = 0;

  void walk(std::size_t i, i128 sum, std::int64_t g) {
    const Axis& a = axes[i];
    const bool last = i + 1 == axes.size();
    for (std::size_t j = 0; j < a.term.size(); ++j) {
      const i128 s = checked_add(sum, a.term[j]);
      const std::int64_t ng = primitive ? std::gcd(g, a.coord[j]) : 0;
      if (last) {
        if (s == 0 && (!primitive || ng == 1)) ++count;
      } else {
        walk(i + 1, s, ng);
      }
    }
  }
};

std::uint64_t full_scan(const std::vector<Axis>& axes, bool primitive, const Budget& budget) {
  u128 ops = 1;
  for (const auto& a : axes) ops *= std::max<std::size_t>(a.term.size(), 1);
  check_ops(ops, budget, "full scan");
  const Axis& first = axes.front();
  if (axes.size() == 1) {
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < first.term.size(); ++j)
      if (first.term[j] == 0 && (!primitive || first.coord[j] == 1)) ++c;
    return c;
  }
  const std::vector<Axis> rest(axes.begin() + 1, axes.end());
  auto partial = parallel::map_chunks<std::uint64_t>(first.term.size(), [&](std::size_t j) {
    ScanState inner{rest, primitive};
    inner.walk(0, first.term[j], primitive ? first.coord[j] : 0);
    return inner.count;
  });
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

// ---- meet in the middle -----------------------------------------------------

struct HalfRecord {
  i128 sum;
  std::int64_t g;
  bool operator<(const HalfRecord& o) const { return sum != o.sum ? sum < o.sum : g < o.g; }
};

std::vector<HalfRecord> enumerate_half(const std::vector<Axis>& axes, const std::vector<std::size_t>& idx,
                                       bool primitive, bool negate) {
  std::vector<HalfRecord> recs{{0, 0}};
  for (std::size_t i : idx) {
    std::vector<HalfRecord> next;
    next.reserve(recs.size() * axes[i].term.size());
    for (const auto& r : recs) {
      for (std::size_t j = 0; j < axes[i].term.size(); ++j) {
        next.push_back({checked_add(r.sum, axes[i].term[j]), primitive ? std::gcd(r.g, axes[i].coord[j]) : 0});
      }
    }
    recs.swap(next);
  }
  if (negate)
    for (auto& r : recs) r.sum = -r.sum;
  std::sort(recs.begin(), recs.end());
  return recs;
}

void split_indices(const std::vector<Axis>& axes, std::vector<std::size_t>& left, std::vector<std::size_t>& right) {
  auto sizes = axis_sizes(axes);
  auto mask = balanced_split(sizes);
  for (std::size_t i = 0; i < axes.size(); ++i) (mask[i] ? left : right).push_back(i);
}

std::uint64_t meet_in_the_middle(const std::vector<Axis>& axes, bool primitive, const Budget& budget) {
  std::vector<std::size_t> left, right;
  split_indices(axes, left, right);
  auto sizes = axis_sizes(axes);
  auto mask = balanced_split(sizes);
  const u128 nl = saturating_product(sizes, mask, true), nr = saturating_product(sizes, mask, false);
  check_ops(nl + nr, budget, "meet-in-the-middle");
  if ((nl + nr) * sizeof(HalfRecord) > budget.max_mem_bytes)
    throw BudgetExceeded("meet-in-the-middle: half tables exceed memory budget");
  auto L = enumerate_half(axes, left, primitive, false);
  auto R = enumerate_half(axes, right, primitive, true);
  u128 count = 0;
  std::size_t i = 0, j = 0;
  while (i < L.size() && j < R.size()) {
    if (L[i].sum < R[j].sum) {
      ++i;
    } else if (R[j].sum < L[i].sum) {
      ++j;
    } else {
      const i128 s = L[i].sum;
      std::size_t ie = i, je = j;
      while (ie < L.size() && L[ie].sum == s) ++ie;
      while (je < R.size() && R[je].sum == s) ++je;
      if (!primitive) {
        count += static_cast<u128>(ie - i) * (je - j);
      } else {
        // Records are sorted by gcd inside a sum group: walk runs of equal gcd.
        for (std::size_t a = i; a < ie;) {
          std::size_t ae = a;
          while (ae < ie && L[ae].g == L[a].g) ++ae;
          for (std::size_t b = j; b < je;) {
            std::size_t be = b;
            while (be < je && R[be].g == R[b].g) ++be;
            if (std::gcd(L[a].g, R[b].g) == 1) count += static_cast<u128>(ae - a) * (be - b);
            b = be;
          }
          a = ae;
        }
      }
      i = ie;
      j = je;
    }
  }
  if (count > UINT64_MAX) throw OverflowError("solution count exceeds 64 bits");
  return static_cast<std::uint64_t>(count);
}

// ---- histogram convolution --------------------------------------------------

struct Histogram {
  i128 lo = 0;
  std::vector<std::uint64_t> dense;                    // dense[s - lo]
  std::vector<std::pair<i128, std::uint64_t>> sparse;  // sorted by sum
  bool is_dense = true;
};

Histogram build_histogram(const std::vector<Axis>& axes, const std::vector<std::size_t>& idx, bool negate,
                          const Budget& budget, u128& ops) {
  i128 lo = 0, hi = 0;
  u128 box = 1;
  for (std::size_t i : idx) {
    const auto [mn, mx] = std::minmax_element(axes[i].term.begin(), axes[i].term.end());
    lo = checked_add(lo, *mn);
    hi = checked_add(hi, *mx);
    box *= axes[i].term.size();
    if (box > UINT64_MAX) throw OverflowError("histogram multiplicities could exceed 64 bits");
  }
  const u128 cells = static_cast<u128>(hi - lo) + 1;
  Histogram h;
  const auto& kernel = kernels::active();
  if (cells <= budget.dense_threshold && cells * sizeof(std::uint64_t) <= budget.max_mem_bytes) {
    h.lo = negate ? -hi : lo;
    std::vector<std::uint64_t> cur{1};
    i128 cur_lo = 0;
    for (std::size_t i : idx) {
      const auto& terms = axes[i].term;
      const i128 tmin = *std::min_element(terms.begin(), terms.end());
      const i128 tmax = *std::max_element(terms.begin(), terms.end());
      std::vector<std::uint64_t> next(cur.size() + static_cast<std::size_t>(tmax - tmin), 0);
      ops += static_cast<u128>(terms.size()) * cur.size();
      check_ops(ops, budget, "histogram convolution");
      for (i128 t : terms) kernel.add_u64(next.data() + static_cast<std::size_t>(t - tmin), cur.data(), cur.size());
      cur.swap(next);
      cur_lo += tmin;
    }
    if (negate) std::reverse(cur.begin(), cur.end());
    h.dense = std::move(cur);
    return h;
  }
  h.is_dense = false;
  std::vector<std::pair<i128, std::uint64_t>> cur{{0, 1}};
  for (std::size_t i : idx) {
    std::vector<std::pair<i128, std::uint64_t>> next;
    ops += static_cast<u128>(axes[i].term.size()) * cur.size();
    check_ops(ops, budget, "sparse histogram convolution");
    if ((static_cast<u128>(axes[i].term.size()) * cur.size()) * sizeof(cur[0]) > budget.max_mem_bytes)
      throw BudgetExceeded("sparse histogram exceeds memory budget");
    next.reserve(axes[i].term.size() * cur.size());
    for (const auto& [s, c] : cur)
      for (i128 t : axes[i].term) next.emplace_back(s + t, c);
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<i128, std::uint64_t>> merged;
    for (const auto& e : next) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(e);
      }
    }
    cur.swap(merged);
  }
  if (negate) {
    for (auto& e : cur) e.first = -e.first;
    std::reverse(cur.begin(), cur.end());
  }
  h.sparse = std::move(cur);
  return h;
}

std::uint64_t lookup(const Histogram& h, i128 s) {
  if (h.is_dense) {
    if (s < h.lo || s >= h.lo + static_cast<i128>(h.dense.size())) return 0;
    return h.dense[static_cast<std::size_t>(s - h.lo)];
  }
  auto it = std::lower_bound(h.sparse.begin(), h.sparse.end(), s,
                             [](const auto& e, i128 v) { return e.first < v; });
  return (it != h.sparse.end() && it->first == s) ? it->second : 0;
}

std::uint64_t histogram_convolution(const std::vector<Axis>& axes, const Budget& budget) {
  std::vector<std::size_t> left, right;
  split_indices(axes, left, right);
  u128 ops = 0;
  // Left holds sums s, right holds -sums, so matches are equal keys.
  Histogram L = build_histogram(axes, left, false, budget, ops);
  Histogram R = build_histogram(axes, right, true, budget, ops);
  u128 count = 0;
  if (L.is_dense) {
    for (std::size_t j = 0; j < L.dense.size(); ++j) {
      if (L.dense[j] == 0) continue;
      count += static_cast<u128>(L.dense[j]) * lookup(R, L.lo + static_cast<i128>(j));
    }
  } else {
    for (const auto& [s, c] : L.sparse) count += static_cast<u128>(c) * lookup(R, s);
  }
  if (count > UINT64_MAX) throw OverflowError("solution count exceeds 64 bits");
  return static_cast<std::uint64_t>(count);
}

std::uint64_t count_zero_sums(const std::vector<Axis>& axes, bool primitive, Method method, const Budget& budget) {
  if (axes.empty()) return 0;
  for (const auto& a : axes)
    if (a.term.empty()) return 0;
  switch (method) {
    case Method::FullScan: return full_scan(axes, primitive, budget);
    case Method::MeetInTheMiddle: return meet_in_the_middle(axes, primitive, budget);
    case Method::HistogramConvolution:
      if (primitive) throw DomainError("histogram convolution cannot enforce primitivity; use meet-in-the-middle");
      return histogram_convolution(axes, budget);
  }
  return 0;
}

template <class F>
SolutionCount timed(std::int64_t B, Method method, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  SolutionCount sc;
  sc.count = f();
  sc.B = B;
  sc.method = method;
  sc.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
  return sc;
}

void check_weights(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k) {
  if (d.size() != w.size()) throw DomainError("coefficient and weight vectors differ in length");
  if (k < 1) throw DomainError("degree must be at least 1");
  for (auto di : d)
    if (di == 0) throw DomainError("coefficients must be nonzero");
  for (int mi : w.m)
    if (mi < 1) throw DomainError("weights must be positive");
}

}  // namespace

std::vector<bool> balanced_split(std::span<const std::uint64_t> sizes) {
  const std::size_t n = sizes.size();
  std::vector<bool> best(n, false);
  if (n == 0) return best;
  best[0] = true;
  if (n == 1) return best;
  if (n > 24) {
    // Greedy: largest axes first onto the lighter side.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });
    long double la = 0, lb = 0;
    std::fill(best.begin(), best.end(), false);
    for (auto i : order) {
      long double li = std::log(static_cast<long double>(std::max<std::uint64_t>(sizes[i], 1)));
      if (la <= lb) {
        best[i] = true;
        la += li;
      } else {
        lb += li;
      }
    }
    if (!best[0]) best.flip();
    return best;
  }
  u128 best_cost = ~static_cast<u128>(0);
  std::vector<bool> mask(n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n - 1)); ++bits) {
    mask[0] = true;
    for (std::size_t i = 1; i < n; ++i) mask[i] = (bits >> (i - 1)) & 1;
    u128 a = saturating_product(sizes, mask, true), b = saturating_product(sizes, mask, false);
    u128 cost = std::max(a, b);
    if (cost < best_cost) {
      best_cost = cost;
      best = mask;
    }
  }
  return best;
}

SolutionCount count_N(const CampanaOrbifold& O, std::int64_t B, Method method, const Budget& budget) {
  O.validate();
  if (B < 1) throw DomainError("count_N: B must be at least 1");
  if (method == Method::HistogramConvolution)
    throw DomainError("count_N needs tuple-level gcd filtering; use meet-in-the-middle or full scan");
  return timed(B, method, [&] {
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < O.size(); ++i) {
      Axis a;
      for (auto x : arith::enumerate_m_full(O.weights.m[i], B)) {
        const i128 xk = checked_pow(x, O.form.k);
        const i128 sign_k = (O.form.k % 2 == 0) ? xk : -xk;
        a.term.push_back(checked_mul(O.form.c[i], xk));
        a.coord.push_back(x);
        a.term.push_back(checked_mul(O.form.c[i], sign_k));
        a.coord.push_back(x);
      }
      axes.push_back(std::move(a));
    }
    return count_zero_sums(axes, true, method, budget);
  });
}

std::uint64_t count_campana(const CampanaOrbifold& O, std::int64_t B, const Budget& budget) {
  const auto n = count_N(O, B, Method::MeetInTheMiddle, budget).count;
  if (n % 2 != 0) throw NumericalDisagreement("count_N is odd; sign symmetry violated");
  return n / 2;
}

std::uint64_t count_N_d(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k, std::int64_t B,
                        const STPair& st, Method method, const Budget& budget) {
  check_weights(d, w, k);
  if (B < 1) throw DomainError("count_N_d: B must be at least 1");
  if (st.s.size() != w.size() || st.t.size() != w.size()) throw DomainError("count_N_d: (s, t) shape mismatch");
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Axis a;
    arith::DivisibilityConstraint con{st.s[i], st.t[i]};
    for (const auto& e : arith::enumerate_m_full_entries(w.m[i], B, con)) {
      a.term.push_back(checked_mul(d[i], checked_pow(e.value, k)));
      a.coord.push_back(e.value);
    }
    axes.push_back(std::move(a));
  }
  return count_zero_sums(axes, false, method, budget);
}

std::uint64_t count_N_star(std::span<const std::int64_t> d, const OrbifoldWeights& w, int k, std::int64_t B,
                           Method method, const Budget& budget) {
  check_weights(d, w, k);
  if (B < 1) throw DomainError("count_N_star: B must be at least 1");
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Axis a;
    for (auto x : arith::enumerate_m_full(w.m[i], B)) {
      a.term.push_back(checked_mul(d[i], checked_pow(x, k)));
      a.coord.push_back(x);
    }
    axes.push_back(std::move(a));
  }
  return count_zero_sums(axes, true, method, budget);
}

std::uint64_t assemble_N(const CampanaOrbifold& O, std::int64_t B, const Budget& budget) {
  O.validate();
  const std::size_t n1 = O.size();
  if (O.form.k % 2 == 0) {
    const auto star = count_N_star(O.form.c, O.weights, O.form.k, B, Method::MeetInTheMiddle, budget);
    return star << n1;
  }
  std::uint64_t total = 0;
  std::vector<std::int64_t> d(n1);
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n1); ++signs) {
    for (std::size_t i = 0; i < n1; ++i) d[i] = ((signs >> i) & 1) ? -O.form.c[i] : O.form.c[i];
    total += count_N_star(d, O.weights, O.form.k, B, Method::MeetInTheMiddle, budget);
  }
  return total;
}

SolutionCount count_M(std::span<const std::int64_t> d, std::span<const std::int64_t> zeta,
                      std::span<const int> mtilde, std::int64_t Btilde, Method method, const Budget& budget) {
  if (d.size() != zeta.size() || d.size() != mtilde.size()) throw DomainError("count_M: length mismatch");
  if (Btilde < 1) throw DomainError("count_M: Btilde must be at least 1");
  return timed(Btilde, method, [&] {
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (zeta[i] < 1) throw DomainError("count_M: zeta entries must be positive");
      if (mtilde[i] < 1) throw DomainError("count_M: exponents must be positive");
      if (d[i] == 0) throw DomainError("count_M: coefficients must be nonzero");
      Axis a;
      for (std::int64_t u = 1;; ++u) {
        const std::int64_t p = pow_capped(u, mtilde[i], Btilde / zeta[i]);
        if (p < 0) break;
        a.term.push_back(checked_mul(checked_mul(d[i], zeta[i]), p));
        a.coord.push_back(u);
      }
      axes.push_back(std::move(a));
    }
    return count_zero_sums(axes, false, method, budget);
  });
}

}  // namespace campana::enumerate
