#pragma once

// JSON encoding of values, families and reports. Rationals travel as
// strings ("p/q", q omitted when 1) so no precision is lost.

#include <string>

#include "json.hpp"
#include "superortho/classifier.hpp"
#include "superortho/estimates.hpp"
#include "superortho/qk.hpp"

namespace superortho::io {

using json = nlohmann::ordered_json;

json encode(const Rational& q);
json encode(const QSqrt2& x);
/// [re.a, re.b, im.a, im.b]
json encode(const Scalar& s);
json encode(const StepFunction& f);
json encode(const Family& fam);

/// Accepts a rational string or an integer.
Rational decode_rational(const json& j);
/// Accepts a 4-array, a 2-array (real part only) or a bare rational.
Scalar decode_scalar(const json& j);
StepFunction decode_step_function(const json& j);
/// Either {"members": [...], "ordering": ...} or a builtin descriptor such as
/// {"builtin": "haar_grid", "root": "[0,1)", "depth": 4}.
Family decode_family(const json& j);
/// {"k": 3, "sequences": [[scalar, ...], ...]}
std::vector<Sequence> decode_sequences(const json& j);
json encode_sequences(const std::vector<Sequence>& seqs);

json encode(const Family& fam, const ClassificationReport& rep);
json encode(const QkReport& rep);
json encode(const RealVariantReport& rep);
json encode(const ConstantBound& b);
json encode(const SquareEstimateReport& rep);
json encode(const IntermediateReport& rep);
json encode(const DecouplingReport& rep);
json encode(const HaarSqfnReport& rep);

/// Parse failures and schema mismatches surface as ParseError.
json parse(const std::string& text);
json read_file(const std::string& path);
/// Writes to `path`, or to stdout when `path` is empty or "-".
void write(const json& j, const std::string& path);

}  // namespace superortho::io
