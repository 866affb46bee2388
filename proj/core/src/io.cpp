#include "laurentcf/io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "laurentcf/error.hpp"

namespace lcf {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return field_of(j, key).get<T>();
  } catch (const Json::exception& e) {
    bad(std::string("key '") + key + "': " + e.what());
  }
}

PrimeField field_from_json(const Json& j) {
  const auto q = get_as<std::int64_t>(j, "q");
  if (q < 2 || q > PrimeField::kMaxPrime) bad("q out of range");
  return PrimeField(static_cast<std::uint32_t>(q));
}

Json poly_list(std::span<const Poly> ps) {
  Json out = Json::array();
  for (const Poly& p : ps) out.push_back(p.to_string());
  return out;
}

}  // namespace

Json integer_json(const Integer& n) { return to_decimal(n); }

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (!j.is_string()) bad("expected a decimal string");
  return parse_integer(j.get<std::string>());
}

Json rational_json(const Rational& value) {
  Rational r = value;
  r.canonicalize();
  return {{"num", to_decimal(r.get_num())}, {"den", to_decimal(r.get_den())}};
}

Rational rational_from_json(const Json& j) {
  const Integer num = integer_from_json(field_of(j, "num"));
  const Integer den = integer_from_json(field_of(j, "den"));
  if (den == 0) bad("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

void write_digits_jsonl(std::ostream& out, const PrimeField& field, std::span<const Poly> digits) {
  out << Json{{"q", field.q()}}.dump() << '\n';
  for (const Poly& p : digits) out << Json(p.to_string()).dump() << '\n';
}

std::pair<PrimeField, DigitSeq> read_digits_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) bad("digit file is empty");
  const Json header = Json::parse(line, nullptr, false);
  if (header.is_discarded()) bad("bad header line");
  const PrimeField field = field_from_json(header);
  DigitSeq digits;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_string()) bad("line " + std::to_string(digits.size() + 2) + " is not a JSON string");
    digits.push_back(parse_poly(field, j.get<std::string>()));
  }
  check_digits(digits);
  return {field, std::move(digits)};
}

Json count_cache_json(const DigitSource& s, Degree max_degree) {
  Json counts = Json::object();
  for (Degree d = 1; d <= max_degree; ++d) counts[std::to_string(d)] = integer_json(s.count_by_degree(d));
  return {{"q", s.field().q()}, {"kind", s.spec()}, {"counts", counts}};
}

void load_count_cache(const Json& j, const DigitSource& s) {
  if (field_from_json(j) != s.field()) throw Error(ErrorKind::FieldMismatch, "cache is for another field");
  if (get_as<std::string>(j, "kind") != s.spec()) {
    throw Error(ErrorKind::InvalidArgument, "cache is for source '" + get_as<std::string>(j, "kind") + "'");
  }
  std::map<Degree, Integer> counts;
  for (const auto& [key, value] : field_of(j, "counts").items()) {
    Degree d = 0;
    try {
      std::size_t used = 0;
      d = std::stoll(key, &used);
      if (used != key.size()) bad("bad degree key '" + key + "'");
    } catch (const std::logic_error&) {
      bad("bad degree key '" + key + "'");
    }
    counts.emplace(d, integer_from_json(value));
  }
  s.preload_counts(counts);
}

Json density_report_json(const DensityProfile& p) {
  Json ratios = Json::array();
  for (const auto& e : p.ratios) {
    ratios.push_back({{"N", e.N}, {"num", to_decimal(e.ratio.get_num())}, {"den", to_decimal(e.ratio.get_den())}});
  }
  return {{"horizon", p.horizon},
          {"ratios", ratios},
          {"argmax", p.argmax_points},
          {"running_max", rational_json(p.running_max)}};
}

Json window_json(const Window& w) {
  return {{"n", w.n}, {"deg_lo", w.deg_lo}, {"deg_hi", w.deg_hi}, {"count", integer_json(w.count)}};
}

Json measure_fit_json(const MeasureBoundFit& f) {
  return {{"rho", f.rho}, {"log2_c0", f.log2_c0}, {"alpha", f.alpha}};
}

Json growth_fit_json(const GrowthFit& f) {
  return {{"alpha", f.alpha},         {"beta", f.beta},
          {"alpha_raw", f.alpha_raw}, {"beta_raw", f.beta_raw},
          {"alpha_snapped", f.alpha_snapped}, {"beta_snapped", f.beta_snapped},
          {"gamma_lo", f.gamma_lo},   {"gamma_hi", f.gamma_hi},
          {"n_min", f.n_min},         {"n_max", f.n_max}};
}

Json plan_json(const InsertionPlan& plan) {
  Json eps = Json::array();
  for (const Rational& e : plan.eps) eps.push_back(rational_json(e));
  Json W = Json::array();
  for (const auto& w : plan.W) W.push_back(poly_list(w));
  Json u_deg = Json::object();
  for (const auto& [d, p] : plan.u_deg) u_deg[std::to_string(d)] = p.to_string();
  return {{"q", plan.field.q()}, {"S", plan.S_spec},   {"U", plan.U_spec}, {"t", plan.t},
          {"horizon", plan.horizon}, {"eps", eps}, {"N", plan.N},  {"M", plan.M},
          {"W", W},           {"u_deg", u_deg}};
}

InsertionPlan plan_from_json(const Json& j) {
  InsertionPlan plan;
  plan.field = field_from_json(j);
  plan.S_spec = get_as<std::string>(j, "S");
  plan.U_spec = get_as<std::string>(j, "U");
  plan.t = get_as<int>(j, "t");
  plan.horizon = get_as<Degree>(j, "horizon");
  for (const Json& e : field_of(j, "eps")) plan.eps.push_back(rational_from_json(e));
  plan.N = get_as<std::vector<Degree>>(j, "N");
  plan.M = get_as<std::vector<std::int64_t>>(j, "M");
  for (const Json& block : field_of(j, "W")) {
    std::vector<Poly> w;
    if (!block.is_array()) bad("W entries must be arrays");
    for (const Json& p : block) {
      if (!p.is_string()) bad("W entries must be polynomial strings");
      w.push_back(parse_poly(plan.field, p.get<std::string>()));
    }
    plan.W.push_back(std::move(w));
  }
  for (const auto& [key, value] : field_of(j, "u_deg").items()) {
    if (!value.is_string()) bad("u_deg values must be polynomial strings");
    plan.u_deg.emplace(std::stoll(key), parse_poly(plan.field, value.get<std::string>()));
  }
  return plan;
}

Json plan_checks_json(std::span<const PlanCheck> checks) {
  Json out = Json::array();
  for (const PlanCheck& c : checks) {
    out.push_back({{"k", c.k},
                   {"w_degree_sum", integer_json(c.w_degree_sum)},
                   {"window_sum", integer_json(c.window_sum)},
                   {"n_star", c.n_star},
                   {"checked_through", c.checked_through}});
  }
  return out;
}

Json holder_report_json(const HolderReport& r) {
  Json samples = Json::array();
  for (const HolderSample& s : r.samples) {
    samples.push_back({{"depth", s.depth},         {"variant", s.variant},
                       {"x_exponent", s.x_exponent}, {"y_exponent", s.y_exponent},
                       {"exponent", s.exponent},   {"k", s.k},
                       {"bound", s.bound},         {"ok", s.ok}});
  }
  Json tiers = Json::array();
  for (const HolderTier& t : r.tiers) {
    tiers.push_back({{"k", t.k},
                     {"eps", rational_json(t.eps)},
                     {"bound", t.bound},
                     {"depths", t.depths},
                     {"min_exponent", t.min_exponent},
                     {"max_exponent", t.max_exponent},
                     {"min_separation", t.min_separation},
                     {"nondecreasing", t.nondecreasing},
                     {"ok", t.ok}});
  }
  return {{"tolerance", r.tolerance}, {"samples", samples}, {"tiers", tiers}, {"ok", r.ok}};
}

Json pattern_report_json(const PatternReport& r) {
  Json out = {{"horizon", r.horizon}, {"L", r.L}, {"k", r.k}, {"degrees", r.degrees},
              {"digits", poly_list(r.digits)}, {"ap", nullptr}, {"affine", nullptr}};
  if (r.ap) out["ap"] = {{"start", r.ap->start}, {"step", r.ap->step}, {"length", r.ap->length}};
  if (r.affine) {
    out["affine"] = {{"F", r.affine->F.to_string()}, {"G", r.affine->G.to_string()}, {"k", r.affine->k}};
  }
  return out;
}

}  // namespace lcf
