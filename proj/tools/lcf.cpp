// lcf: command-line front end for the laurentcf library.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "laurentcf/cfcore.hpp"
#include "laurentcf/densities.hpp"
#include "laurentcf/digitsource.hpp"
#include "laurentcf/error.hpp"
#include "laurentcf/gfpoly.hpp"
#include "laurentcf/insertion.hpp"
#include "laurentcf/io.hpp"
#include "laurentcf/laurent.hpp"
#include "laurentcf/patterns.hpp"
#include "laurentcf/seedset.hpp"

namespace {

using lcf::Json;

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::uint32_t q = 2;
  unsigned threads = 1;
  std::uint64_t cap = lcf::kDefaultEnumerationCap;
  std::string out;
};

Json envelope(Json config, Json result) {
  return {{"version", kVersion}, {"config", std::move(config)}, {"result", std::move(result)}};
}

void emit(const Globals& g, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  const std::filesystem::path target(g.out);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw lcf::Error(lcf::ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    f << text;
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw lcf::Error(lcf::ErrorKind::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw lcf::Error(lcf::ErrorKind::ParseError, path + " is not valid JSON");
  // Accept a bare document or a CLI envelope.
  if (j.is_object() && j.contains("result") && j.contains("version")) return j.at("result");
  return j;
}

lcf::PrimeField field_of(const Globals& g) { return lcf::PrimeField(g.q); }

lcf::SourcePtr source(const Globals& g, const std::string& spec) {
  return lcf::make_source(field_of(g), spec, g.cap);
}

std::vector<lcf::Rational> parse_eps(const std::vector<std::string>& items) {
  std::vector<lcf::Rational> out;
  for (const std::string& s : items) {
    const auto slash = s.find('/');
    const lcf::Integer num = lcf::parse_integer(s.substr(0, slash));
    const lcf::Integer den = slash == std::string::npos ? lcf::Integer(1) : lcf::parse_integer(s.substr(slash + 1));
    if (den == 0) throw lcf::Error(lcf::ErrorKind::ParseError, "zero denominator in eps '" + s + "'");
    lcf::Rational r(num, den);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

lcf::SeedSpec seed_spec(int t, const std::string& policy, std::uint64_t seed) {
  lcf::SeedSpec spec;
  spec.t = t;
  spec.seed = seed;
  if (policy == "canonical") {
    spec.policy = lcf::DigitPolicy::CanonicalMin;
  } else if (policy == "random") {
    spec.policy = lcf::DigitPolicy::SeededRandom;
  } else {
    throw lcf::Error(lcf::ErrorKind::InvalidArgument, "policy must be canonical or random");
  }
  return spec;
}

Json poly_list(std::span<const lcf::Poly> ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

struct PlanFile {
  lcf::InsertionPlan plan;
  lcf::PlanContext ctx;
};

PlanFile load_plan(const Globals& g, const std::string& path) {
  lcf::InsertionPlan plan = lcf::plan_from_json(read_json(path));
  Globals pg = g;
  pg.q = plan.field.q();
  lcf::PlanContext ctx = lcf::make_plan_context(source(pg, plan.S_spec), source(pg, plan.U_spec));
  return {std::move(plan), std::move(ctx)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continued fractions over F_q((1/X))"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals g;
  app.add_option("--q", g.q, "field size (prime)")->default_val(2);
  app.add_option("--threads", g.threads, "worker threads")->default_val(1)->check(CLI::Range(1U, 256U));
  app.add_option("--cap", g.cap, "enumeration cap")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write JSON here instead of stdout");

  std::function<void()> run;

  // cf -----------------------------------------------------------------
  auto* cf = app.add_subcommand("cf", "continued fraction expansions");
  cf->require_subcommand(1);

  std::string cf_input;
  bool cf_series = false;
  std::size_t cf_max = 64;
  auto* cf_expand = cf->add_subcommand("expand", "digits of a rational function or series");
  cf_expand->add_option("input", cf_input, "P/Q, or a series with --series")->required();
  cf_expand->add_flag("--series", cf_series, "input is deg:..;coeffs:..;through:..");
  cf_expand->add_option("--max-digits", cf_max, "digit limit for series input");
  cf_expand->callback([&] {
    run = [&] {
      const lcf::PrimeField field = field_of(g);
      Json config = {{"command", "cf expand"}, {"q", g.q}, {"input", cf_input}, {"series", cf_series}};
      Json result;
      if (cf_series) {
        config["max_digits"] = cf_max;
        const auto c = lcf::cf_digits_certified(lcf::parse_series(field, cf_input), cf_max);
        result = {{"digits", poly_list(c.digits)},
                  {"certified_count", c.certified_count},
                  {"terminated", c.terminated}};
      } else {
        result = poly_list(lcf::cf_expand_rational(lcf::parse_rational(field, cf_input)));
      }
      emit(g, envelope(config, result));
    };
  });

  std::string cf_file;
  lcf::Degree cf_through = -1;
  auto* cf_value = cf->add_subcommand("value", "convergents and series of a digit file");
  cf_value->add_option("digitfile", cf_file, "digit JSONL file")->required();
  cf_value->add_option("--through", cf_through, "series precision (default 2 sum deg)");
  cf_value->callback([&] {
    run = [&] {
      std::ifstream in(cf_file, std::ios::binary);
      if (!in) throw lcf::Error(lcf::ErrorKind::InvalidArgument, "cannot read " + cf_file);
      const auto [field, digits] = lcf::read_digits_jsonl(in);
      Json conv = Json::array();
      for (const auto& c : lcf::convergents(digits, digits.size())) {
        conv.push_back({{"p", c.p.to_string()}, {"q", c.q.to_string()}});
      }
      const lcf::RationalFunction value = lcf::cf_value(field, digits);
      const lcf::Degree through = cf_through >= 0 ? cf_through : 2 * lcf::degree_sum(digits);
      const Json config = {{"command", "cf value"}, {"q", field.q()}, {"digits", poly_list(digits)},
                           {"through", through}};
      emit(g, envelope(config, {{"convergents", conv},
                                {"value", value.to_string()},
                                {"series", lcf::from_rational(value, through).to_text()},
                                {"diameter_exponent", lcf::cylinder_diameter(digits).exponent}}));
    };
  });

  // poly ---------------------------------------------------------------
  auto* poly = app.add_subcommand("poly", "polynomials over F_q");
  poly->require_subcommand(1);

  lcf::Degree poly_d = 1;
  bool poly_monic = false;
  auto* count_irr = poly->add_subcommand("count-irreducible", "number of irreducibles of degree d");
  count_irr->add_option("--d", poly_d, "degree")->required()->check(CLI::PositiveNumber);
  count_irr->add_flag("--monic", poly_monic, "monic only");
  count_irr->callback([&] {
    run = [&] {
      const Json config = {{"command", "poly count-irreducible"}, {"q", g.q}, {"d", poly_d}, {"monic", poly_monic}};
      emit(g, envelope(config, lcf::integer_json(lcf::count_irreducible(field_of(g), poly_d, poly_monic))));
    };
  });

  std::string poly_text;
  std::string poly_source = "full";
  auto* rank = poly->add_subcommand("rank", "canonical rank of a polynomial");
  rank->add_option("poly", poly_text, "polynomial")->required();
  rank->add_option("--source", poly_source, "rank within this digit source instead");
  rank->callback([&] {
    run = [&] {
      const lcf::Poly p = lcf::parse_poly(field_of(g), poly_text);
      Json config = {{"command", "poly rank"}, {"q", g.q}, {"poly", p.to_string()}, {"source", poly_source}};
      Json result = {{"rank", lcf::integer_json(lcf::rank(p))}, {"value", lcf::integer_json(p.value())}};
      if (poly_source != "full") result["source_rank"] = lcf::integer_json(source(g, poly_source)->source_rank(p));
      emit(g, envelope(config, result));
    };
  });

  std::string poly_r;
  auto* unrank = poly->add_subcommand("unrank", "polynomial of a canonical rank");
  unrank->add_option("rank", poly_r, "rank >= 1")->required();
  unrank->add_option("--source", poly_source, "unrank within this digit source instead");
  unrank->callback([&] {
    run = [&] {
      const lcf::Integer r = lcf::parse_integer(poly_r);
      const Json config = {{"command", "poly unrank"}, {"q", g.q}, {"rank", poly_r}, {"source", poly_source}};
      const lcf::Poly p = poly_source == "full" ? lcf::unrank(field_of(g), r) : source(g, poly_source)->source_unrank(r);
      emit(g, envelope(config, p.to_string()));
    };
  });

  lcf::Degree counts_max = 12;
  std::string counts_import;
  auto* counts = poly->add_subcommand("counts", "per-degree count table of a digit source");
  counts->add_option("--source", poly_source, "digit source")->required();
  counts->add_option("--max-degree", counts_max, "last degree")->check(CLI::PositiveNumber);
  counts->add_option("--import", counts_import, "preload counts from a cache file");
  counts->callback([&] {
    run = [&] {
      auto s = source(g, poly_source);
      if (!counts_import.empty()) lcf::load_count_cache(read_json(counts_import), *s);
      const Json config = {{"command", "poly counts"}, {"q", g.q}, {"source", poly_source}, {"max_degree", counts_max}};
      emit(g, envelope(config, lcf::count_cache_json(*s, counts_max)));
    };
  });

  // density ------------------------------------------------------------
  auto* density = app.add_subcommand("density", "relative density profiles");
  density->require_subcommand(1);

  std::string dens_U;
  std::string dens_S = "full";
  lcf::Degree dens_h = 12;
  auto* dpoly = density->add_subcommand("poly", "#Q_N(U) / #Q_N(S)");
  dpoly->add_option("--U", dens_U, "subset source")->required();
  dpoly->add_option("--S", dens_S, "ambient source");
  dpoly->add_option("--horizon", dens_h, "last N")->check(CLI::PositiveNumber);
  dpoly->callback([&] {
    run = [&] {
      const Json config = {{"command", "density poly"}, {"q", g.q}, {"U", dens_U}, {"S", dens_S}, {"horizon", dens_h}};
      const auto p = lcf::poly_density_profile(*source(g, dens_U), *source(g, dens_S), dens_h);
      emit(g, envelope(config, lcf::density_report_json(p)));
    };
  });

  std::string dens_B;
  std::string dens_G = "all";
  auto* dint = density->add_subcommand("int", "#(B cap [1,N]) / #(G cap [1,N])");
  dint->add_option("--B", dens_B, "subset")->required();
  dint->add_option("--G", dens_G, "ambient set");
  dint->add_option("--horizon", dens_h, "last N")->check(CLI::PositiveNumber);
  dint->callback([&] {
    run = [&] {
      const Json config = {{"command", "density int"}, {"B", dens_B}, {"G", dens_G}, {"horizon", dens_h}};
      const auto p = lcf::int_density_profile(lcf::parse_int_set(dens_B), lcf::parse_int_set(dens_G), dens_h);
      emit(g, envelope(config, lcf::density_report_json(p)));
    };
  });

  // seed ---------------------------------------------------------------
  auto* seed = app.add_subcommand("seed", "seed set windows");
  seed->require_subcommand(1);

  std::string seed_S = "full";
  std::string seed_U;
  int seed_t = 0;
  std::int64_t seed_h = 6;
  auto* report = seed->add_subcommand("report", "windows, counts and local-dimension profile");
  report->add_option("--S", seed_S, "base source");
  report->add_option("--U", seed_U, "remove the canonical minimum of U in each degree first");
  report->add_option("--t", seed_t, "window exponent (default: smallest feasible >= 3)");
  report->add_option("--horizon", seed_h, "number of windows")->check(CLI::PositiveNumber);
  report->callback([&] {
    run = [&] {
      lcf::SourcePtr base = source(g, seed_S);
      if (!seed_U.empty()) base = lcf::make_plan_context(base, source(g, seed_U)).S_tilde;
      const int t = seed_t > 0 ? seed_t : lcf::choose_t(base, seed_h);
      const lcf::SparseSubset sparse(base);
      const auto windows = lcf::window_table(sparse, t, seed_h, g.threads);
      std::vector<lcf::Degree> degs;
      Json digits = Json::array();
      for (std::int64_t n = 1; n <= seed_h; ++n) {
        const lcf::Poly a = lcf::seed_digit(sparse, {t, lcf::DigitPolicy::CanonicalMin, 0}, n);
        degs.push_back(a.degree());
        digits.push_back({{"n", n}, {"degree", a.degree()}, {"rank", lcf::integer_json(base->source_rank(a))}});
      }
      Json wins = Json::array();
      for (const auto& w : windows) wins.push_back(lcf::window_json(w));
      const auto fit = lcf::fit_measure_bound(windows, t, g.q);
      Json bound = Json::array();
      for (std::int64_t n = 1; n <= seed_h; ++n) bound.push_back(lcf::measure_bound_log2(fit, t, g.q, n));
      const Json config = {{"command", "seed report"}, {"q", g.q}, {"S", seed_S}, {"U", seed_U},
                           {"t", seed_t}, {"horizon", seed_h}};
      emit(g, envelope(config, {{"t", t},
                                {"windows", wins},
                                {"profile", lcf::local_dim_profile(windows, degs, g.q)},
                                {"canonical_digits", digits},
                                {"measure_fit", lcf::measure_fit_json(fit)},
                                {"measure_bound_log2", bound}}));
    };
  });

  // plan ---------------------------------------------------------------
  auto* plan = app.add_subcommand("plan", "insertion plans");
  plan->require_subcommand(1);

  std::string plan_S = "full";
  std::string plan_U;
  std::vector<std::string> plan_eps;
  lcf::PlanBuildOptions plan_opts;
  auto* build = plan->add_subcommand("build", "build and validate a plan");
  build->add_option("--S", plan_S, "digit set S");
  build->add_option("--U", plan_U, "subset U of S")->required();
  build->add_option("--eps", plan_eps, "eps_1 > eps_2 > ... as a/b (default 1/(k+1))");
  build->add_option("--horizon", plan_opts.horizon, "density horizon")->check(CLI::PositiveNumber);
  build->add_option("--count", plan_opts.count, "number of blocks (default: every argmax point)");
  build->add_option("--t", plan_opts.t, "window exponent (default: smallest feasible >= 3)");
  build->callback([&] {
    run = [&] {
      plan_opts.eps = parse_eps(plan_eps);
      const auto ctx = lcf::make_plan_context(source(g, plan_S), source(g, plan_U));
      const auto p = lcf::build_plan(ctx, plan_opts);
      const Json config = {{"command", "plan build"}, {"q", g.q}, {"S", plan_S}, {"U", plan_U},
                           {"eps", plan_eps}, {"horizon", plan_opts.horizon},
                           {"count", plan_opts.count}, {"t", plan_opts.t}};
      emit(g, envelope(config, lcf::plan_json(p)));
    };
  });

  std::string plan_file;
  auto* validate = plan->add_subcommand("validate", "re-check every plan condition");
  validate->add_option("plan", plan_file, "plan JSON")->required();
  validate->callback([&] {
    run = [&] {
      const auto pf = load_plan(g, plan_file);
      const auto checks = lcf::validate_plan(pf.plan, pf.ctx);
      const Json config = {{"command", "plan validate"}, {"plan", lcf::plan_json(pf.plan)}};
      emit(g, envelope(config, {{"valid", true}, {"checks", lcf::plan_checks_json(checks)}}));
    };
  });

  // point --------------------------------------------------------------
  auto* point = app.add_subcommand("point", "points of the construction");
  point->require_subcommand(1);

  std::size_t point_n = 32;
  std::string point_policy = "canonical";
  std::uint64_t point_seed = 0;
  std::string point_jsonl;
  lcf::Degree point_through = 64;
  auto* pemit = point->add_subcommand("emit", "digits of f^-1(seed point)");
  pemit->add_option("--plan", plan_file, "plan JSON")->required();
  pemit->add_option("--digits", point_n, "number of digits")->check(CLI::PositiveNumber);
  pemit->add_option("--policy", point_policy, "canonical or random");
  pemit->add_option("--seed", point_seed, "seed for the random policy");
  pemit->add_option("--jsonl", point_jsonl, "also write the digits as JSON Lines");
  pemit->add_option("--series-through", point_through, "series precision cap");
  pemit->callback([&] {
    run = [&] {
      const auto pf = load_plan(g, plan_file);
      const auto spec = seed_spec(pf.plan.t, point_policy, point_seed);
      const auto seeds = lcf::seed_prefix(pf.ctx, spec, static_cast<std::int64_t>(point_n), g.threads);
      const auto x = lcf::insert_digits(seeds, pf.plan, point_n);
      if (!point_jsonl.empty()) {
        std::ofstream f(point_jsonl, std::ios::binary);
        lcf::write_digits_jsonl(f, pf.plan.field, x);
      }
      const lcf::Degree through = std::min(point_through, 2 * lcf::degree_sum(x));
      const auto value = lcf::from_rational(lcf::cf_value(pf.plan.field, x), through).truncate(through);
      const Json config = {{"command", "point emit"}, {"plan", lcf::plan_json(pf.plan)},
                           {"digits", point_n}, {"policy", point_policy}, {"seed", point_seed},
                           {"series_through", point_through}};
      emit(g, envelope(config, {{"q", pf.plan.field.q()},
                                {"digits", poly_list(x)},
                                {"series", value.to_text()}}));
    };
  });

  // diag ---------------------------------------------------------------
  auto* diag = app.add_subcommand("diag", "diagnostics");
  diag->require_subcommand(1);

  std::vector<std::int64_t> diag_depths;
  std::size_t diag_variants = 3;
  double diag_tol = lcf::kHolderTolerance;
  auto* holder = diag->add_subcommand("holder", "measured Holder exponents of the inverse map");
  holder->add_option("--plan", plan_file, "plan JSON")->required();
  holder->add_option("--depths", diag_depths, "divergence depths s")->required()->delimiter(',');
  holder->add_option("--variants", diag_variants, "pairs per depth")->check(CLI::PositiveNumber);
  holder->add_option("--tolerance", diag_tol, "allowed shortfall");
  holder->add_option("--policy", point_policy, "canonical or random");
  holder->add_option("--seed", point_seed, "seed for the random policy");
  holder->callback([&] {
    run = [&] {
      const auto pf = load_plan(g, plan_file);
      const auto spec = seed_spec(pf.plan.t, point_policy, point_seed);
      const auto r = lcf::holder_diagnostic(pf.plan, pf.ctx, spec, diag_depths, diag_variants, g.threads, diag_tol);
      const Json config = {{"command", "diag holder"}, {"plan", lcf::plan_json(pf.plan)},
                           {"depths", diag_depths}, {"variants", diag_variants},
                           {"tolerance", diag_tol}, {"policy", point_policy}, {"seed", point_seed}};
      emit(g, envelope(config, lcf::holder_report_json(r)));
    };
  });

  // pattern ------------------------------------------------------------
  auto* pattern = app.add_subcommand("pattern", "pattern detectors");
  pattern->require_subcommand(1);

  std::string pat_point;
  std::string pat_U;
  std::int64_t pat_L = 3;
  int pat_k = 1;
  std::size_t pat_h = 0;
  bool pat_h_set = false;
  auto* scan = pattern->add_subcommand("scan", "progressions and affine configurations along a point");
  scan->add_option("--point", pat_point, "digit JSONL file")->required();
  scan->add_option("--U", pat_U, "digit set")->required();
  scan->add_option("--L", pat_L, "progression length")->check(CLI::Range(3, 1 << 20));
  scan->add_option("--k", pat_k, "affine dimension")->check(CLI::Range(1, 64));
  scan->add_option("--horizon", pat_h, "digits to scan (default all)")->each([&](const std::string&) { pat_h_set = true; });
  scan->callback([&] {
    run = [&] {
      std::ifstream in(pat_point, std::ios::binary);
      if (!in) throw lcf::Error(lcf::ErrorKind::InvalidArgument, "cannot read " + pat_point);
      const auto [field, digits] = lcf::read_digits_jsonl(in);
      Globals pg = g;
      pg.q = field.q();
      const std::size_t h = pat_h_set ? pat_h : digits.size();
      const auto r = lcf::scan_point_patterns(digits, *source(pg, pat_U), h, pat_L, pat_k);
      const Json config = {{"command", "pattern scan"}, {"q", field.q()}, {"digits", poly_list(digits)},
                           {"U", pat_U}, {"L", pat_L}, {"k", pat_k}, {"horizon", h}};
      emit(g, envelope(config, lcf::pattern_report_json(r)));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cout << Json{{"error", {{"kind", "ParseError"}, {"detail", e.what()}}}}.dump() << "\n";
    return 2;
  }
  try {
    if (!lcf::is_prime(g.q) || g.q > lcf::PrimeField::kMaxPrime) {
      throw lcf::Error(lcf::ErrorKind::InvalidArgument, "q must be a prime <= 251");
    }
    run();
  } catch (const lcf::Error& e) {
    std::cout << Json{{"error", {{"kind", std::string(lcf::to_string(e.kind()))}, {"detail", e.what()}}}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", {{"kind", "Internal"}, {"detail", e.what()}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
