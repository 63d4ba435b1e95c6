// campana: command-line front end.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "campana/arith.hpp"
#include "campana/circle.hpp"
#include "campana/enumerate.hpp"
#include "campana/inclusion_exclusion.hpp"
#include "campana/io.hpp"
#include "campana/kernels.hpp"
#include "campana/orbifold.hpp"
#include "campana/parallel.hpp"

using namespace campana;
using io::Json;

namespace {

struct Globals {
  unsigned threads = 0;
  std::uint64_t seed = 1;
  std::uint64_t budget_mem = enumerate::Budget{}.max_mem_bytes;
  std::uint64_t budget_ops = enumerate::Budget{}.max_ops;
  std::string format = "json";
  std::string out;
  std::string simd;
  bool no_timing = false;
};

struct OrbifoldArgs {
  std::string spec;
  int k = 0;
  std::vector<std::int64_t> c;
  std::vector<int> m;
  bool given() const { return !spec.empty() || !c.empty() || !m.empty(); }
};

// A diagonal counting problem sum d_i zeta_i u_i^mt_i.
struct FormArgs {
  bool quadratic7 = false;
  std::vector<std::int64_t> d;
  std::vector<std::int64_t> zeta;
  std::vector<int> mt;
  bool given() const { return quadratic7 || !d.empty(); }
};

struct TruncArgs {
  std::string series_mode = "qsum";
  std::int64_t qmax = 500;
  std::int64_t pmax = 101;
  int level = 3;
  std::string integral = "slab";
  std::uint64_t samples = 10'000'000;
  double eps_scale = 1.0;
  double lambda = 1000.0;
  double step = 0.5;
  double rel_tol = 1e-3;
  std::int64_t rcap = 16;
  std::vector<std::int64_t> caps;
};

Globals G;

enumerate::Budget budget() {
  enumerate::Budget b;
  b.max_mem_bytes = G.budget_mem;
  b.max_ops = G.budget_ops;
  return b;
}

std::string str(const Rational& r) { return to_string(r); }

void add_orbifold_flags(CLI::App* cmd, OrbifoldArgs& a) {
  cmd->add_option("--spec", a.spec, "orbifold JSON file {\"k\", \"c\", \"m\"}");
  cmd->add_option("--k", a.k, "degree k");
  cmd->add_option("--c", a.c, "coefficients c_0,...,c_n")->delimiter(',');
  cmd->add_option("--m", a.m, "weights m_0,...,m_n")->delimiter(',');
}

void add_form_flags(CLI::App* cmd, FormArgs& f) {
  cmd->add_flag("--quadratic7", f.quadratic7, "d=(1,1,1,1,-1,-1,-1), zeta=1, mt=(2,...,2)");
  cmd->add_option("--d", f.d, "coefficients d_i")->delimiter(',');
  cmd->add_option("--zeta", f.zeta, "multipliers zeta_i (default all 1)")->delimiter(',');
  cmd->add_option("--mt", f.mt, "exponents mt_i")->delimiter(',');
}

void add_trunc_flags(CLI::App* cmd, TruncArgs& t) {
  cmd->add_option("--series-mode", t.series_mode, "qsum | euler")->check(CLI::IsMember({"qsum", "euler"}));
  cmd->add_option("--qmax", t.qmax, "q-sum truncation Q_max");
  cmd->add_option("--pmax", t.pmax, "Euler product prime cap");
  cmd->add_option("--level", t.level, "Euler factor level l (modulus p^l)");
  cmd->add_option("--integral", t.integral, "slab | oscillatory")->check(CLI::IsMember({"slab", "oscillatory"}));
  cmd->add_option("--samples", t.samples, "Monte Carlo samples for the slab method");
  cmd->add_option("--eps-scale", t.eps_scale, "slab eps ladder scale");
  cmd->add_option("--lambda", t.lambda, "oscillatory lambda cutoff");
  cmd->add_option("--step", t.step, "oscillatory initial panel width");
  cmd->add_option("--rel-tol", t.rel_tol, "oscillatory refinement tolerance");
  cmd->add_option("--rcap", t.rcap, "cap R for the (s, t, vt) sums of leading constants");
  cmd->add_option("--caps", t.caps, "caps at which partial sums are reported")->delimiter(',');
}

CampanaOrbifold resolve(const OrbifoldArgs& a) {
  if (!a.spec.empty()) {
    if (!a.c.empty() || !a.m.empty() || a.k != 0) throw CLI::ValidationError("--spec", "cannot be combined with --k/--c/--m");
    return io::load_orbifold(a.spec);
  }
  if (a.c.empty() || a.m.empty() || a.k == 0)
    throw CLI::ValidationError("orbifold", "give --spec FILE or all of --k, --c, --m");
  CampanaOrbifold O;
  O.form.k = a.k;
  O.form.c = a.c;
  O.weights.m = a.m;
  O.validate();
  return O;
}

struct Form {
  std::vector<std::int64_t> d, zeta;
  std::vector<int> mt;
};

Form resolve(const FormArgs& f) {
  Form out;
  if (f.quadratic7) {
    if (!f.d.empty() || !f.mt.empty()) throw CLI::ValidationError("--quadratic7", "cannot be combined with --d/--mt");
    out.d = {1, 1, 1, 1, -1, -1, -1};
    out.mt.assign(7, 2);
  } else {
    if (f.d.empty() || f.mt.empty()) throw CLI::ValidationError("form", "give --quadratic7 or --d and --mt");
    out.d = f.d;
    out.mt = f.mt;
  }
  out.zeta = f.zeta.empty() ? std::vector<std::int64_t>(out.d.size(), 1) : f.zeta;
  if (out.d.size() != out.mt.size() || out.d.size() != out.zeta.size())
    throw CLI::ValidationError("form", "--d, --zeta and --mt must have equal length");
  return out;
}

Json form_json(const Form& f) { return Json{{"d", f.d}, {"zeta", f.zeta}, {"mt", f.mt}}; }

circle::Truncation truncation(const TruncArgs& t) {
  circle::Truncation tr;
  tr.series.mode = t.series_mode == "euler" ? circle::SeriesMode::Euler : circle::SeriesMode::QSum;
  tr.series.q_max = t.qmax;
  tr.series.prime_cap = t.pmax;
  tr.series.level = t.level;
  tr.integral.method = t.integral == "oscillatory" ? circle::IntegralMethod::Oscillatory : circle::IntegralMethod::Slab;
  tr.integral.samples = t.samples;
  tr.integral.seed = G.seed;
  tr.integral.eps_scale = t.eps_scale;
  tr.integral.lambda_cutoff = t.lambda;
  tr.integral.initial_step = t.step;
  tr.integral.rel_tol = t.rel_tol;
  tr.R_cap = t.rcap;
  tr.caps = t.caps;
  return tr;
}

Json trunc_json(const TruncArgs& t) {
  return Json{{"series_mode", t.series_mode}, {"qmax", t.qmax},       {"pmax", t.pmax},
              {"level", t.level},             {"integral", t.integral}, {"samples", t.samples},
              {"eps_scale", t.eps_scale},     {"lambda", t.lambda},   {"step", t.step},
              {"rel_tol", t.rel_tol},         {"rcap", t.rcap},       {"caps", t.caps}};
}

Json series_json(const circle::SeriesResult& S) {
  Json j{{"mode", S.options.mode == circle::SeriesMode::QSum ? "qsum" : "euler"},
         {"value", io::number(S.value)},
         {"imag_residual", io::number(S.imag_residual)},
         {"tail_estimate", io::number(S.tail_estimate)},
         {"gamma_tilde", str(S.gamma_tilde)},
         {"outside_theorem", S.outside_theorem},
         {"warnings", S.warnings}};
  if (S.options.mode == circle::SeriesMode::QSum) {
    j["qmax"] = S.options.q_max;
  } else {
    j["pmax"] = S.options.prime_cap;
    j["level"] = S.options.level;
    Json lf = Json::array();
    for (auto [p, f] : S.local_factors) lf.push_back(Json{{"p", p}, {"factor", io::number(f)}});
    j["local_factors"] = lf;
  }
  return j;
}

Json integral_json(const circle::IntegralResult& J) {
  Json j{{"method", J.options.method == circle::IntegralMethod::Slab ? "slab" : "oscillatory"},
         {"value", io::number(J.value)},
         {"std_error", io::number(J.std_error)},
         {"definite", J.definite}};
  if (J.options.method == circle::IntegralMethod::Slab) {
    j["samples"] = J.options.samples;
    j["seed"] = J.options.seed;
    Json ladder = Json::array();
    for (auto [e, v] : J.ladder) ladder.push_back(Json{{"eps", io::number(e)}, {"value", io::number(v)}});
    j["ladder"] = ladder;
    j["slope"] = io::number(J.slope);
  } else {
    j["lambda_cutoff"] = io::number(J.options.lambda_cutoff);
    j["final_step"] = io::number(J.last_step);
    j["refinements"] = J.refinements;
    j["tail_correction"] = io::number(J.tail_correction);
  }
  return j;
}

Json constant_json(const circle::LeadingConstant& C) {
  Json partial = Json::array();
  for (const auto& p : C.partial_sums)
    partial.push_back(Json{{"cap", p.cap}, {"value", io::number(p.value)}, {"delta", io::number(p.delta)}, {"terms", p.terms}});
  return Json{{"value", io::number(C.value)},
              {"uncertainty", io::number(C.uncertainty)},
              {"integral", io::number(C.integral_value)},
              {"integral_error", io::number(C.integral_error)},
              {"series_sum", io::number(C.series_sum)},
              {"pairs", C.pairs},
              {"pairs_nonzero", C.pairs_nonzero},
              {"triples", C.triples},
              {"admissible", C.admissible},
              {"partial_sums", partial},
              {"warnings", C.warnings}};
}

class Output {
 public:
  Output() {
    if (!G.out.empty()) {
      file_ = std::make_unique<std::ofstream>(G.out);
      if (!*file_) throw DomainError("cannot open output file " + G.out);
    }
    writer_ = std::make_unique<io::RecordWriter>(file_ ? *file_ : std::cout, io::parse_format(G.format));
  }
  // Prepends the provenance fields shared by every record.
  void emit(const std::string& command, const Json& config, const Json& body) {
    Json rec{{"command", command},
             {"version", CAMPANA_VERSION},
             {"seed", G.seed},
             {"simd", kernels::isa_name(kernels::active_isa())},
             {"config", config}};
    for (const auto& [k, v] : body.items()) rec[k] = v;
    writer_->write(rec);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::unique_ptr<io::RecordWriter> writer_;
};

std::vector<std::vector<std::int64_t>> parse_t(const std::string& s) {
  // coordinates separated by '/', entries by ','; an empty group is an empty t_i
  std::vector<std::vector<std::int64_t>> t;
  std::stringstream coords(s);
  std::string group;
  while (std::getline(coords, group, '/')) {
    std::vector<std::int64_t> row;
    std::stringstream entries(group);
    std::string e;
    while (std::getline(entries, e, ','))
      if (!e.empty()) row.push_back(std::stoll(e));
    t.push_back(row);
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Campana points on diagonal hypersurfaces: exact counts and circle-method predictions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", CAMPANA_VERSION);
  app.add_option("--threads", G.threads, "worker threads (0 = all cores)");
  app.add_option("--seed", G.seed, "Monte Carlo seed");
  app.add_option("--budget-mem", G.budget_mem, "memory cap per table in bytes");
  app.add_option("--budget-ops", G.budget_ops, "operation cap for exact counts");
  app.add_option("--format", G.format, "json | csv")->check(CLI::IsMember({"json", "jsonl", "csv"}));
  app.add_option("--out", G.out, "output file (default stdout)");
  app.add_option("--simd", G.simd, "scalar | avx2 (default: detect)")->check(CLI::IsMember({"scalar", "avx2"}));
  app.add_flag("--no-timing", G.no_timing, "omit wall-clock fields from records");

  // decompose
  auto* dec = app.add_subcommand("decompose", "unique m-full representation of x");
  std::int64_t dec_x = 0;
  int dec_m = 2;
  dec->add_option("x", dec_x, "integer")->required();
  dec->add_option("--m", dec_m, "m")->required();

  // admissible
  auto* adm = app.add_subcommand("admissible", "admissibility report");
  OrbifoldArgs adm_o;
  add_orbifold_flags(adm, adm_o);

  // count
  auto* cnt = app.add_subcommand("count", "exact solution counts");
  OrbifoldArgs cnt_o;
  FormArgs cnt_f;
  std::string cnt_mode = "campana", cnt_method = "mitm", cnt_t;
  std::int64_t cnt_B = 0;
  std::vector<std::int64_t> cnt_s;
  add_orbifold_flags(cnt, cnt_o);
  add_form_flags(cnt, cnt_f);
  cnt->add_option("--mode", cnt_mode, "campana | N | Nstar | Nd | M")
      ->check(CLI::IsMember({"campana", "N", "Nstar", "Nd", "M"}));
  cnt->add_option("--B", cnt_B, "height bound (Bt for mode M)")->required();
  cnt->add_option("--method", cnt_method, "mitm | scan | histogram")->check(CLI::IsMember({"mitm", "scan", "histogram"}));
  cnt->add_option("--s", cnt_s, "Nd: s_i")->delimiter(',');
  cnt->add_option("--t", cnt_t, "Nd: t vectors, coordinates separated by '/', entries by ','");

  // predict
  auto* pre = app.add_subcommand("predict", "main-term prediction or orbifold leading constant");
  OrbifoldArgs pre_o;
  FormArgs pre_f;
  TruncArgs pre_t;
  double pre_B = 0;
  add_orbifold_flags(pre, pre_o);
  add_form_flags(pre, pre_f);
  add_trunc_flags(pre, pre_t);
  pre->add_option("--B", pre_B, "Bt for forms, B for orbifolds")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "exact counts against predictions over a grid");
  OrbifoldArgs cmp_o;
  FormArgs cmp_f;
  TruncArgs cmp_t;
  std::vector<std::int64_t> cmp_grid;
  add_orbifold_flags(cmp, cmp_o);
  add_form_flags(cmp, cmp_f);
  add_trunc_flags(cmp, cmp_t);
  cmp->add_option("--grid", cmp_grid, "bounds")->delimiter(',')->required();

  // series
  auto* ser = app.add_subcommand("series", "singular series");
  FormArgs ser_f;
  TruncArgs ser_t;
  std::string ser_mode = "qsum";
  double ser_tol = 0.01;
  add_form_flags(ser, ser_f);
  add_trunc_flags(ser, ser_t);
  ser->add_option("--mode", ser_mode, "qsum | euler | both")->check(CLI::IsMember({"qsum", "euler", "both"}));
  ser->add_option("--tol", ser_tol, "relative tolerance for --mode both");

  // integral
  auto* itg = app.add_subcommand("integral", "singular integral");
  FormArgs itg_f;
  TruncArgs itg_t;
  std::string itg_method = "slab";
  double itg_sigmas = 3.0;
  add_form_flags(itg, itg_f);
  add_trunc_flags(itg, itg_t);
  itg->add_option("--method", itg_method, "slab | oscillatory | both")
      ->check(CLI::IsMember({"slab", "oscillatory", "both"}));
  itg->add_option("--sigmas", itg_sigmas, "agreement threshold for --method both");

  // varpi-table
  auto* vt = app.add_subcommand("varpi-table", "inclusion-exclusion weights over T_R");
  std::vector<int> vt_m;
  std::int64_t vt_R = 16;
  vt->add_option("--m", vt_m, "weights m_i")->delimiter(',')->required();
  vt->add_option("--R", vt_R, "cap R");

  // ie-check
  auto* iec = app.add_subcommand("ie-check", "compare N* with the inclusion-exclusion sum of N_d");
  OrbifoldArgs iec_o;
  std::int64_t iec_B = 0;
  add_orbifold_flags(iec, iec_o);
  iec->add_option("--B", iec_B, "height bound")->required();

  // density
  auto* den = app.add_subcommand("density", "local density modulo p^l");
  FormArgs den_f;
  std::int64_t den_p = 2;
  int den_l = 1;
  add_form_flags(den, den_f);
  den->add_option("--p", den_p, "prime")->required();
  den->add_option("--level", den_l, "level l");

  // minor-arcs
  auto* mia = app.add_subcommand("minor-arcs", "arc dissection and sampled minor-arc Weyl sums");
  FormArgs mia_f;
  double mia_B = 0, mia_delta = 0.1;
  std::size_t mia_samples = 10000;
  add_form_flags(mia, mia_f);
  mia->add_option("--B", mia_B, "Bt")->required();
  mia->add_option("--delta", mia_delta, "delta");
  mia->add_option("--samples", mia_samples, "alpha grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    parallel::set_threads(G.threads);
    if (!G.simd.empty()) kernels::force_isa(G.simd == "avx2" ? kernels::Isa::Avx2 : kernels::Isa::Scalar);
    Output out;

    if (*dec) {
      const auto D = arith::m_full_decompose(dec_x, dec_m);
      out.emit("decompose", Json{{"x", dec_x}, {"m", dec_m}},
               Json{{"sign", D.sign}, {"u", D.u}, {"v", D.v}});
    } else if (*adm) {
      const auto O = resolve(adm_o);
      const auto R = orbifold::check_admissible(O);
      std::vector<std::int64_t> s0;
      for (int m : R.sorted_m) s0.push_back(orbifold::s0(O.form.k * m));
      out.emit("admissible", io::to_json(O),
               Json{{"theta", str(R.theta)},
                    {"gamma", str(R.gamma)},
                    {"k_gamma", str(R.k_gamma)},
                    {"sum_inv_km", str(R.sum_inv_km)},
                    {"s0_km", s0},
                    {"mean_value_condition", R.mean_value_condition},
                    {"convergence_condition", R.convergence_condition},
                    {"weights_sorted", R.weights_sorted},
                    {"degree_ok", R.degree_ok},
                    {"admissible", R.admissible()},
                    {"verdict", R.admissible() ? "PASS" : "FAIL"}});
    } else if (*cnt) {
      const auto method = cnt_method == "scan"        ? enumerate::Method::FullScan
                          : cnt_method == "histogram" ? enumerate::Method::HistogramConvolution
                                                      : enumerate::Method::MeetInTheMiddle;
      const auto t0 = std::chrono::steady_clock::now();
      Json config, body;
      std::uint64_t count = 0;
      if (cnt_mode == "M") {
        const auto F = resolve(cnt_f);
        config = form_json(F);
        const auto m = cnt_method == "mitm" ? enumerate::Method::HistogramConvolution : method;
        count = enumerate::count_M(F.d, F.zeta, F.mt, cnt_B, m, budget()).count;
        body["method"] = enumerate::method_name(m);
      } else {
        const auto O = resolve(cnt_o);
        config = io::to_json(O);
        if (cnt_mode == "campana") {
          count = enumerate::count_campana(O, cnt_B, budget());
        } else if (cnt_mode == "N") {
          count = enumerate::count_N(O, cnt_B, method, budget()).count;
        } else if (cnt_mode == "Nstar") {
          count = enumerate::count_N_star(O.form.c, O.weights, O.form.k, cnt_B, method, budget());
        } else {
          STPair st = STPair::ones(O.weights);
          if (!cnt_s.empty()) st.s = cnt_s;
          if (!cnt_t.empty()) st.t = parse_t(cnt_t);
          config["s"] = st.s;
          config["t"] = st.t;
          count = enumerate::count_N_d(O.form.c, O.weights, O.form.k, cnt_B, st, method, budget());
        }
        if (cnt_mode != "campana") body["method"] = enumerate::method_name(method);
      }
      config["mode"] = cnt_mode;
      config["B"] = cnt_B;
      body["count"] = count;
      if (!G.no_timing)
        body["elapsed_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      out.emit("count", config, body);
    } else if (*pre) {
      const auto tr = truncation(pre_t);
      if (pre_f.given()) {
        const auto F = resolve(pre_f);
        Json config = form_json(F);
        config["B"] = pre_B;
        config["truncation"] = trunc_json(pre_t);
        const auto P = circle::predict_M(F.d, F.zeta, F.mt, pre_B, tr);
        out.emit("predict", config,
                 Json{{"gamma_tilde", str(P.gamma_tilde)},
                      {"theta_tilde", str(P.theta_tilde)},
                      {"series_value", io::number(P.series_value)},
                      {"series_tail", io::number(P.series_tail)},
                      {"integral_value", io::number(P.integral_value)},
                      {"integral_error", io::number(P.integral_error)},
                      {"zeta_factor", io::number(P.zeta_factor)},
                      {"main_term", io::number(P.main_term)},
                      {"uncertainty", io::number(P.uncertainty)},
                      {"outside_theorem", P.outside_theorem}});
      } else {
        const auto O = resolve(pre_o);
        Json config = io::to_json(O);
        config["B"] = pre_B;
        config["truncation"] = trunc_json(pre_t);
        const auto C = circle::leading_constant_full(O, tr);
        const double expo = orbifold::fujita_exponent(O).convert_to<double>();
        Json parts = Json::array();
        for (const auto& [ec, part] : C.parts) {
          Json p = constant_json(part);
          p["d"] = ec;
          parts.push_back(p);
        }
        out.emit("predict", config,
                 Json{{"k_gamma", str(orbifold::fujita_exponent(O))},
                      {"constant", io::number(C.value)},
                      {"constant_uncertainty", io::number(C.uncertainty)},
                      {"main_term", io::number(C.value * std::pow(pre_B, expo))},
                      {"parts", parts}});
      }
    } else if (*cmp) {
      const auto tr = truncation(cmp_t);
      Json config;
      circle::Comparison C;
      if (cmp_f.given()) {
        const auto F = resolve(cmp_f);
        config = form_json(F);
        C = circle::compare_M(F.d, F.zeta, F.mt, cmp_grid, tr, budget());
      } else {
        const auto O = resolve(cmp_o);
        config = io::to_json(O);
        C = circle::compare_orbifold(O, cmp_grid, tr, budget());
      }
      config["grid"] = cmp_grid;
      config["truncation"] = trunc_json(cmp_t);
      for (const auto& row : C.rows) {
        out.emit("compare", config,
                 Json{{"kind", "row"},
                      {"B", row.B},
                      {"count", row.count ? Json(*row.count) : Json(nullptr)},
                      {"predicted", io::number(row.predicted)},
                      {"ratio", row.count ? io::number(row.ratio) : Json(nullptr)},
                      {"status", row.status},
                      {"fitted_exponent", nullptr},
                      {"expected_exponent", nullptr},
                      {"fit_points", nullptr}});
      }
      out.emit("compare", config,
               Json{{"kind", "fit"},
                    {"B", nullptr},
                    {"count", nullptr},
                    {"predicted", io::number(C.constant)},
                    {"ratio", nullptr},
                    {"status", "ok"},
                    {"fitted_exponent", io::number(C.fitted_exponent)},
                    {"expected_exponent", io::number(C.expected_exponent)},
                    {"fit_points", C.fit_points}});
    } else if (*ser) {
      const auto F = resolve(ser_f);
      auto tr = truncation(ser_t);
      Json config = form_json(F);
      config["mode"] = ser_mode;
      config["truncation"] = trunc_json(ser_t);
      if (ser_mode != "both") {
        tr.series.mode = ser_mode == "euler" ? circle::SeriesMode::Euler : circle::SeriesMode::QSum;
        out.emit("series", config, series_json(circle::singular_series(F.d, F.zeta, F.mt, tr.series)));
      } else {
        tr.series.mode = circle::SeriesMode::QSum;
        const auto a = circle::singular_series(F.d, F.zeta, F.mt, tr.series);
        tr.series.mode = circle::SeriesMode::Euler;
        const auto b = circle::singular_series(F.d, F.zeta, F.mt, tr.series);
        const double rel = std::abs(a.value - b.value) / std::max(std::abs(a.value), std::abs(b.value));
        config["tol"] = ser_tol;
        out.emit("series", config,
                 Json{{"qsum", series_json(a)}, {"euler", series_json(b)}, {"relative_difference", io::number(rel)},
                      {"agree", rel <= ser_tol}});
        if (!(rel <= ser_tol))
          throw NumericalDisagreement("q-sum and Euler product differ by " + std::to_string(rel));
      }
    } else if (*itg) {
      const auto F = resolve(itg_f);
      auto tr = truncation(itg_t);
      Json config = form_json(F);
      config["method"] = itg_method;
      config["truncation"] = trunc_json(itg_t);
      if (itg_method != "both") {
        tr.integral.method = itg_method == "slab" ? circle::IntegralMethod::Slab : circle::IntegralMethod::Oscillatory;
        out.emit("integral", config, integral_json(circle::singular_integral(F.d, F.mt, tr.integral)));
      } else {
        const auto cc = circle::cross_check_integral(F.d, F.mt, tr.integral, itg_sigmas);
        config["sigmas"] = itg_sigmas;
        out.emit("integral", config,
                 Json{{"slab", integral_json(cc.slab)},
                      {"oscillatory", integral_json(cc.oscillatory)},
                      {"difference", io::number(cc.difference)},
                      {"combined_error", io::number(cc.combined_error)},
                      {"agree", cc.agree}});
        if (!cc.agree) throw NumericalDisagreement("slab and oscillatory integrals disagree");
      }
    } else if (*vt) {
      OrbifoldWeights w{vt_m};
      w.validate();
      for (const auto& st : ie::enumerate_T(vt_R, w)) {
        out.emit("varpi-table", Json{{"m", vt_m}, {"R", vt_R}},
                 Json{{"s", st.s}, {"t", st.t}, {"weights", ie::coordinate_weights(st, w, vt_R)},
                      {"varpi", ie::varpi(st, w)}});
      }
    } else if (*iec) {
      const auto O = resolve(iec_o);
      const auto R = ie::verify_ie_identity(O.form.c, O.weights, O.form.k, iec_B, budget());
      Json config = io::to_json(O);
      config["B"] = iec_B;
      out.emit("ie-check", config,
               Json{{"lhs", R.lhs}, {"rhs", to_string(R.rhs)}, {"difference", to_string(R.difference)},
                    {"pairs", R.pairs}, {"nonzero_terms", R.nonzero_terms}});
      if (R.difference != 0) throw NumericalDisagreement("inclusion-exclusion identity fails");
    } else if (*den) {
      const auto F = resolve(den_f);
      Json config = form_json(F);
      config["p"] = den_p;
      config["level"] = den_l;
      const auto exact = circle::local_density(F.d, F.zeta, F.mt, den_p, den_l, budget());
      const auto sums = circle::local_factor_from_sums(F.d, F.zeta, F.mt, den_p, den_l);
      out.emit("density", config,
               Json{{"exact", str(exact)},
                    {"value", io::number(exact.convert_to<double>())},
                    {"from_complete_sums", io::number(sums.real())},
                    {"from_complete_sums_imag", io::number(sums.imag())}});
    } else if (*mia) {
      const auto F = resolve(mia_f);
      Json config = form_json(F);
      config["B"] = mia_B;
      config["delta"] = mia_delta;
      config["samples"] = mia_samples;
      const auto D = circle::minor_arcs(mia_B, mia_delta);
      const auto rows = circle::minor_arc_scan(F.d, F.zeta, F.mt, mia_B, mia_delta, mia_samples);
      Json jr = Json::array();
      for (const auto& r : rows)
        jr.push_back(Json{{"index", r.index}, {"d", r.d}, {"zeta", r.zeta}, {"mt", r.m}, {"length", r.length},
                          {"sup", io::number(r.sup)}, {"alpha_at_sup", io::number(r.alpha_at_sup)},
                          {"bound", io::number(r.bound)}, {"ratio", io::number(r.ratio)},
                          {"samples_on_minor", r.samples_on_minor}});
      out.emit("minor-arcs", config,
               Json{{"Q", io::number(D.Q)}, {"radius", io::number(D.radius)}, {"major_arcs", D.arcs.size()},
                    {"major_measure", io::number(D.major_measure)}, {"minor_measure", io::number(D.minor_measure)},
                    {"measure_bound", io::number(D.measure_bound)}, {"rows", jr}});
    }
  } catch (const io::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const NumericalDisagreement& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::NumericalDisagreement);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Budget);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Domain);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
