#pragma once

#include <iosfwd>
#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <utility>

#include "laurentcf/cfcore.hpp"
#include "laurentcf/densities.hpp"
#include "laurentcf/digitsource.hpp"
#include "laurentcf/insertion.hpp"
#include "laurentcf/patterns.hpp"
#include "laurentcf/seedset.hpp"

namespace lcf {

// Keys are kept in sorted order (nlohmann::json stores objects in a
// std::map), big integers are decimal strings and rationals {"num","den"}.
using Json = nlohmann::json;

Json integer_json(const Integer& n);
Integer integer_from_json(const Json& j);
Json rational_json(const Rational& r);
Rational rational_from_json(const Json& j);

/// Digit-sequence file: a {"q": ...} header line, then one polynomial string
/// per line.
void write_digits_jsonl(std::ostream& out, const PrimeField& field, std::span<const Poly> digits);
std::pair<PrimeField, DigitSeq> read_digits_jsonl(std::istream& in);

/// {"q", "kind", "counts": {d: "D_d"}} for d = 1..max_degree.
Json count_cache_json(const DigitSource& s, Degree max_degree);
/// Checks q and kind, then preloads the counts into s.
void load_count_cache(const Json& j, const DigitSource& s);

Json density_report_json(const DensityProfile& p);

Json window_json(const Window& w);
Json measure_fit_json(const MeasureBoundFit& f);
Json growth_fit_json(const GrowthFit& f);

Json plan_json(const InsertionPlan& plan);
InsertionPlan plan_from_json(const Json& j);
Json plan_checks_json(std::span<const PlanCheck> checks);

Json holder_report_json(const HolderReport& r);
Json pattern_report_json(const PatternReport& r);

}  // namespace lcf
