// Acceptance run: one PASS/FAIL line per criterion. The CLI path is argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "campana/arith.hpp"
#include "campana/circle.hpp"
#include "campana/enumerate.hpp"
#include "campana/inclusion_exclusion.hpp"
#include "campana/orbifold.hpp"
#include "oracles.hpp"

using namespace campana;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << id << "  " << name << "  (" << detail << ")" << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

CampanaOrbifold orb(int k, std::vector<std::int64_t> c, std::vector<int> m) { return {{k, std::move(c)}, {std::move(m)}}; }

const std::vector<std::int64_t> kD7{1, 1, 1, 1, -1, -1, -1};
const std::vector<std::int64_t> kOnes7(7, 1);
const std::vector<int> kM7(7, 2);

void decomposition_suite() {
  const auto t0 = Clock::now();
  std::size_t checked = 0, bad = 0;
  for (int m = 2; m <= 4; ++m) {
    for (std::int64_t x : arith::enumerate_m_full(m, 1000000)) {
      if (x < 2) continue;
      for (std::int64_t sx : {x, -x}) {
        const auto d = arith::m_full_decompose(sx, m);
        bool ok = arith::m_full_compose(d) == sx && oracle::compose(d.u, d.v, m) == x && d.sign == (sx > 0 ? 1 : -1);
        for (std::size_t r = 0; r < d.v.size(); ++r) {
          ok = ok && oracle::squarefree(d.v[r]);
          for (std::size_t q = 0; q < r; ++q) ok = ok && std::gcd(d.v[r], d.v[q]) == 1;
        }
        bad += !ok;
        ++checked;
      }
    }
    // every (u, v) with value <= 10^4 gives a distinct integer, and the
    // library picks exactly that (u, v)
    std::map<std::int64_t, oracle::UV> seen;
    for (const auto& uv : oracle::all_uv(m, 10000)) {
      const auto x = oracle::compose(uv.u, uv.v, m);
      if (!seen.emplace(x, uv).second) ++bad;
    }
    if (seen.size() != oracle::m_full_scan(m, 10000).size()) ++bad;
    for (const auto& [x, uv] : seen) {
      const auto d = arith::m_full_decompose(x, m);
      if (d.u != uv.u || d.v != uv.v) ++bad;
    }
  }
  const double secs = seconds_since(t0);
  report(1, "decomposition suite", bad == 0 && secs < 60,
         std::to_string(checked) + " signed values, " + std::to_string(bad) + " violations, " + fmt(secs, 3) + " s");
}

void squareful_census() {
  const auto small = arith::enumerate_m_full(2, 50);
  const bool exact = small == std::vector<std::int64_t>{1, 4, 8, 9, 16, 25, 27, 32, 36, 49};
  const auto big = arith::enumerate_m_full(2, 100000);
  std::vector<std::int64_t> scan_lib, scan_oracle;
  for (std::int64_t x = 1; x <= 100000; ++x) {
    if (arith::is_m_full(x, 2)) scan_lib.push_back(x);
    if (oracle::is_m_full(x, 2)) scan_oracle.push_back(x);
  }
  report(2, "squareful census", exact && big == scan_lib && big == scan_oracle,
         "B=50 list " + std::string(exact ? "exact" : "wrong") + ", B=1e5: " + std::to_string(big.size()) +
             " enumerated vs " + std::to_string(scan_lib.size()) + " scanned");
}

std::vector<CampanaOrbifold> battery() {
  return {orb(2, {1, -1}, {2, 2}),          orb(2, {1, 1, -2}, {2, 2, 2}),        orb(2, {1, 1, -1}, {2, 2, 2}),
          orb(2, {1, -1}, {2, 3}),          orb(2, {1, 2, -3}, {2, 2, 2}),        orb(2, {2, 1, -3}, {2, 3, 2}),
          orb(2, {1, 1, -1, -1}, {2, 2, 2, 2}), orb(3, {1, -1}, {2, 2}),          orb(3, {1, 1, -2}, {2, 2, 2}),
          orb(3, {1, 1, -1, -1}, {2, 2, 2, 2}), orb(3, {1, 2, -3}, {2, 3, 2}),    orb(1, {1, 1, -1}, {2, 2, 2})};
}

std::int64_t bound_for(const CampanaOrbifold& O) { return O.size() >= 4 ? 100 : 200; }

void half_identity() {
  int instances = 0, bad = 0;
  std::uint64_t total = 0;
  for (const auto& O : battery()) {
    const auto B = bound_for(O);
    const auto n = enumerate::count_N(O, B).count;
    const auto c = enumerate::count_campana(O, B);
    bad += n != 2 * c;
    total += n;
    ++instances;
  }
  report(3, "count_N = 2 count_campana", bad == 0 && instances >= 10,
         std::to_string(instances) + " orbifolds, B <= 200, total N = " + std::to_string(total));
}

void sign_assembly() {
  int even = 0, odd = 0, bad = 0;
  for (const auto& O : battery()) {
    if (O.form.k != 2 && O.form.k != 3) continue;
    const auto B = bound_for(O);
    bad += enumerate::assemble_N(O, B) != enumerate::count_N(O, B).count;
    (O.form.k % 2 ? odd : even) += 1;
  }
  report(4, "assemble_N = count_N", bad == 0 && even > 0 && odd > 0,
         std::to_string(even) + " even-k and " + std::to_string(odd) + " odd-k instances, " + std::to_string(bad) +
             " mismatches");
}

void ie_identity() {
  struct Case {
    std::vector<std::int64_t> d;
    std::vector<int> m;
    int k;
    std::int64_t B;
  };
  const std::vector<Case> cases = {{{1, 1, -2}, {2, 2, 2}, 2, 50},  {{1, 1, -2}, {2, 2, 2}, 2, 200},
                                   {{1, -1}, {2, 2}, 2, 200},       {{1, 1, -1}, {2, 2, 2}, 1, 200},
                                   {{1, 1, -1}, {2, 3, 2}, 1, 200}, {{1, 2, -1}, {2, 2, 2}, 2, 200},
                                   {{1, -1, 1, -1}, {2, 2, 2, 2}, 2, 100}};
  int bad = 0;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto r = ie::verify_ie_identity(c.d, {c.m}, c.k, c.B);
    bad += r.difference != 0;
    detail << to_string(static_cast<i128>(r.lhs)) << "=" << to_string(r.rhs) << " ";
  }
  report(5, "inclusion-exclusion identity", bad == 0 && cases.size() >= 5,
         std::to_string(cases.size()) + " instances, N* = sum: " + detail.str());
}

std::vector<STPair> smooth_pairs(const OrbifoldWeights& w, const std::vector<std::int64_t>& primes, std::int64_t cap) {
  std::set<std::int64_t> sm{1};
  std::vector<std::int64_t> todo{1};
  while (!todo.empty()) {
    const auto x = todo.back();
    todo.pop_back();
    for (auto p : primes)
      if (x * p <= cap && sm.insert(x * p).second) todo.push_back(x * p);
  }
  const std::vector<std::int64_t> smooth(sm.begin(), sm.end());
  std::vector<std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>>> per;
  for (int m : w.m) {
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> opts;
    std::vector<std::int64_t> t(static_cast<std::size_t>(m - 1), 1);
    std::function<void(int, i128)> rec = [&](int r, i128 acc) {
      if (r == m) {
        for (auto s : smooth) {
          if (acc * oracle::ipow(s, m) > cap) break;
          opts.emplace_back(s, t);
        }
        return;
      }
      for (auto x : smooth) {
        if (acc * oracle::ipow(x, m + r) > cap) break;
        t[static_cast<std::size_t>(r - 1)] = x;
        rec(r + 1, acc * oracle::ipow(x, m + r));
      }
      t[static_cast<std::size_t>(r - 1)] = 1;
    };
    rec(1, 1);
    per.push_back(std::move(opts));
  }
  std::vector<STPair> out;
  STPair cur = STPair::ones(w);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == w.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& [s, t] : per[i]) {
      cur.s[i] = s;
      cur.t[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

void varpi_vanishing() {
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p <= 50; ++p)
    if (oracle::is_prime(p)) primes.push_back(p);
  std::size_t pairs = 0, forced = 0, violations = 0;
  const std::vector<std::pair<std::vector<int>, std::int64_t>> shapes = {
      {{2, 2}, 10000}, {{2, 3}, 10000}, {{3, 3}, 10000}, {{2, 2, 2}, 1000}};
  for (const auto& [m, cap] : shapes) {
    const OrbifoldWeights w{m};
    for (const auto& st : smooth_pairs(w, primes, cap)) {
      ++pairs;
      bool square = false, lonely = false;
      std::vector<std::int64_t> coord;
      for (std::size_t i = 0; i < w.size(); ++i) {
        std::int64_t c = st.s[i];
        square = square || !oracle::squarefree(st.s[i]);
        for (auto t : st.t[i]) {
          square = square || !oracle::squarefree(t);
          c *= t;
        }
        coord.push_back(c);
      }
      for (std::size_t i = 0; i < coord.size(); ++i)
        for (auto [p, e] : oracle::factor(coord[i]))
          for (auto cj : coord) lonely = lonely || cj % p != 0;
      if (square || lonely) {
        ++forced;
        violations += ie::varpi(st, w) != 0;
      }
    }
  }
  report(6, "varpi vanishing", violations == 0 && forced > 0,
         std::to_string(pairs) + " pairs with support <= 50, " + std::to_string(forced) + " required zeros, " +
             std::to_string(violations) + " violations");
}

void s0_golden() {
  const bool s4 = orbifold::s0(4) == 8;
  const auto r16 = orbifold::check_admissible(orb(2, std::vector<std::int64_t>(16, 1), std::vector<int>(16, 2)));
  const auto r17 = orbifold::check_admissible(orb(2, std::vector<std::int64_t>(17, 1), std::vector<int>(17, 2)));
  const bool flip = !r16.mean_value_condition && r17.mean_value_condition && r16.theta == 0 &&
                    r17.theta == Rational(1, 16);
  report(7, "s0 golden values", s4 && flip,
         "s0(4) = " + std::to_string(orbifold::s0(4)) + ", theta(16 twos) = " + to_string(r16.theta) +
             ", theta(17 twos) = " + to_string(r17.theta));
}

void euler_density() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::int64_t worst_p = 0;
  for (auto p : arith::primes_up_to(23)) {
    const double exact = circle::local_density(kD7, kOnes7, kM7, p, 3).convert_to<double>();
    const double sums = circle::local_factor_from_sums(kD7, kOnes7, kM7, p, 3).real();
    const double rel = std::abs(sums - exact) / exact;
    if (rel >= worst) {
      worst = rel;
      worst_p = p;
    }
  }
  const double secs = seconds_since(t0);
  report(8, "local density vs Euler factor", worst <= 1e-3 && secs < 300,
         "p <= 23, level 3, worst relative gap " + fmt(worst, 3) + " at p = " + std::to_string(worst_p) + ", " +
             fmt(secs, 3) + " s");
}

void integral_golden() {
  const std::vector<std::int64_t> d{1, 1, -1};
  const std::vector<int> m{2, 2, 2};
  circle::IntegralOptions o;
  o.samples = 10'000'000;
  const auto slab = circle::singular_integral(d, m, o);
  const double z = (slab.value - std::numbers::pi / 4) / slab.std_error;
  const auto x = circle::cross_check_integral(kD7, kM7);
  report(9, "singular integral", std::abs(z) <= 3 && x.agree,
         "cone: " + fmt(slab.value) + " +- " + fmt(slab.std_error, 2) + " (" + fmt(z, 2) +
             " se from pi/4); seven-variable: slab " + fmt(x.slab.value) + " vs oscillatory " +
             fmt(x.oscillatory.value) + ", gap " + fmt(x.difference, 2) + " <= 3 x " + fmt(x.combined_error, 2));
}

void end_to_end() {
  const auto t0 = Clock::now();
  std::vector<double> xs, ys;
  std::uint64_t at4096 = 0;
  for (std::int64_t B : {1024, 2048, 4096, 8192}) {
    const auto c = enumerate::count_M(kD7, kOnes7, kM7, B, enumerate::Method::HistogramConvolution).count;
    xs.push_back(static_cast<double>(B));
    ys.push_back(static_cast<double>(c));
    if (B == 4096) at4096 = c;
  }
  const double slope = circle::loglog_slope(xs, ys);
  const auto P = circle::predict_M(kD7, kOnes7, kM7, 4096.0);
  const double rel = std::abs(P.main_term - static_cast<double>(at4096)) / static_cast<double>(at4096);
  const double secs = seconds_since(t0);
  report(10, "end-to-end main term", std::abs(slope - 2.5) <= 0.05 && rel <= 0.15 && secs < 600,
         "fitted exponent " + fmt(slope, 5) + ", count(4096) = " + std::to_string(at4096) + ", main term " +
             fmt(P.main_term, 9) + ", gap " + fmt(100 * rel, 3) + "%, " + fmt(secs, 3) + " s");
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  pclose(f);
  return out;
}

void determinism(const std::string& cli) {
  if (cli.empty()) {
    report(11, "determinism", false, "no CLI path given");
    return;
  }
  const std::string predict = cli + " predict --quadratic7 --B 4096 --seed 1";
  const auto a = run(predict), b = run(predict);
  const std::string count = " --no-timing count --mode M --quadratic7 --B 2048";
  const auto c1 = run(cli + " --threads 1" + count);
  const auto c4 = run(cli + " --threads 4" + count);
  const std::string campana = " --no-timing count --mode campana --k 2 --c 1,1,-1,-1 --m 2,2,2,2 --B 150";
  const auto n1 = run(cli + " --threads 1" + campana);
  const auto n3 = run(cli + " --threads 3" + campana);
  auto field = [](const std::string& s) {
    try {
      return nlohmann::json::parse(s).at("count").dump();
    } catch (...) {
      return std::string("?");
    }
  };
  const bool ok = !a.empty() && a == b && !c1.empty() && field(c1) == field(c4) && field(c1) != "?" &&
                  field(n1) == field(n3) && field(n1) != "?";
  report(11, "determinism", ok,
         std::string("predict records ") + (a == b ? "byte-identical" : "differ") + " (" + std::to_string(a.size()) +
             " bytes); count_M " + field(c1) + " vs " + field(c4) + ", campana " + field(n1) + " vs " + field(n3) +
             " across thread counts");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::function<void()>> steps = {
      decomposition_suite, squareful_census, half_identity, sign_assembly, ie_identity, varpi_vanishing,
      s0_golden,           euler_density,    integral_golden, end_to_end,  [&] { determinism(cli); }};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      steps[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "criterion", false, std::string("exception: ") + e.what());
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
