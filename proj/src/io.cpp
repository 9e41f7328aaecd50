#include "superortho/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "superortho/error.hpp"
#include "superortho/families.hpp"

namespace superortho::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

unsigned as_unsigned(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<unsigned>();
}

}  // namespace

json encode(const Rational& q) { return to_string(q); }

json encode(const QSqrt2& x) {
  return json::array({encode(x.rational_part()), encode(x.sqrt2_part())});
}

json encode(const Scalar& s) {
  return json::array({encode(s.real().rational_part()), encode(s.real().sqrt2_part()),
                      encode(s.imag().rational_part()), encode(s.imag().sqrt2_part())});
}

json encode(const StepFunction& f) {
  json bp = json::array();
  for (const auto& b : f.breakpoints()) bp.push_back(encode(b));
  json vals = json::array();
  for (const auto& v : f.values()) vals.push_back(encode(v));
  return json{{"breakpoints", bp}, {"values", vals}};
}

json encode(const Family& fam) {
  json members = json::array();
  for (const auto& m : fam.members()) members.push_back(json{{"label", m.label}, {"fn", encode(m.fn)}});
  json ordering = nullptr;
  if (fam.has_ordering()) ordering = fam.ordering_labels();
  return json{{"members", members}, {"ordering", ordering}};
}

Rational decode_rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  throw ParseError("expected a rational string, got " + j.dump());
}

Scalar decode_scalar(const json& j) {
  if (j.is_array()) {
    if (j.size() == 4) {
      return Scalar(QSqrt2(decode_rational(j[0]), decode_rational(j[1])),
                    QSqrt2(decode_rational(j[2]), decode_rational(j[3])));
    }
    if (j.size() == 2) return Scalar(QSqrt2(decode_rational(j[0]), decode_rational(j[1])));
    throw ParseError("scalar arrays have 2 or 4 entries, got " + j.dump());
  }
  return Scalar(decode_rational(j));
}

StepFunction decode_step_function(const json& j) {
  return guarded("step function", [&] {
    const json& bp = require(j, "breakpoints");
    const json& vals = require(j, "values");
    if (!bp.is_array() || !vals.is_array()) throw ParseError("breakpoints and values must be arrays");
    std::vector<Rational> b;
    for (const auto& x : bp) b.push_back(decode_rational(x));
    std::vector<Scalar> v;
    for (const auto& x : vals) v.push_back(decode_scalar(x));
    try {
      return StepFunction(std::move(b), std::move(v));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  });
}

Family decode_family(const json& j) {
  return guarded("family", [&]() -> Family {
    if (!j.is_object()) throw ParseError("family must be a JSON object");
    if (j.contains("builtin")) {
      const std::string kind = require(j, "builtin").get<std::string>();
      if (kind == "haar_grid") {
        const DyadicInterval root = DyadicInterval::parse(
            j.contains("root") ? j.at("root").get<std::string>() : std::string("[0,1)"));
        return haar_grid(root, as_unsigned(j, "depth"));
      }
      if (kind == "indicator_complement") return indicator_complement_family(as_unsigned(j, "n"));
      if (kind == "typeiv") {
        TypeIVConfig cfg;
        cfg.k = as_unsigned(j, "k");
        cfg.n = as_unsigned(j, "n");
        if (j.contains("g")) {
          for (const auto& g : j.at("g")) cfg.g.push_back(decode_rational(g));
        } else {
          cfg.g.assign(cfg.n, Rational(1));
        }
        return typeiv_construction(cfg);
      }
      throw ParseError("unknown builtin '" + kind + "'");
    }
    const json& ms = require(j, "members");
    if (!ms.is_array()) throw ParseError("members must be an array");
    std::vector<Family::Member> members;
    for (const auto& m : ms) {
      const json& label = require(m, "label");
      members.push_back({label.is_string() ? label.get<std::string>() : label.dump(),
                         decode_step_function(require(m, "fn"))});
    }
    std::optional<std::vector<std::string>> ordering;
    if (j.contains("ordering") && !j.at("ordering").is_null()) {
      const json& o = j.at("ordering");
      if (o.is_string()) {
        if (o.get<std::string>() != "natural") throw ParseError("ordering must be \"natural\", a list or null");
        ordering = natural_ordering(members);
      } else {
        ordering = o.get<std::vector<std::string>>();
      }
    }
    try {
      return Family(std::move(members), std::move(ordering));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  });
}

std::vector<Sequence> decode_sequences(const json& j) {
  return guarded("sequences", [&] {
    const json& seqs = require(j, "sequences");
    if (!seqs.is_array() || seqs.empty()) throw ParseError("sequences must be a non-empty array");
    std::vector<Sequence> out;
    for (const auto& s : seqs) {
      if (!s.is_array()) throw ParseError("each sequence must be an array");
      Sequence seq;
      for (const auto& x : s) seq.push_back(decode_scalar(x));
      out.push_back(std::move(seq));
    }
    if (j.contains("k") && j.at("k").get<std::size_t>() != out.size()) {
      throw ParseError("k does not match the number of sequences");
    }
    return out;
  });
}

json encode_sequences(const std::vector<Sequence>& seqs) {
  json out = json::array();
  for (const auto& s : seqs) {
    json row = json::array();
    for (const auto& x : s) row.push_back(encode(x));
    out.push_back(row);
  }
  return json{{"k", seqs.size()}, {"sequences", out}};
}

json encode(const Family& fam, const ClassificationReport& rep) {
  json types = json::object();
  for (const auto& [t, v] : rep.verdicts) {
    json entry;
    switch (v.status) {
      case TypeVerdict::Status::Holds: entry["holds"] = true; break;
      case TypeVerdict::Status::Fails: entry["holds"] = false; break;
      case TypeVerdict::Status::NotApplicable: entry["holds"] = nullptr; break;
    }
    entry["classes_checked"] = v.classes_checked;
    if (v.witness) {
      entry["witness"] = json{{"left", labels_of(fam, v.witness->left)},
                              {"right", labels_of(fam, v.witness->right)},
                              {"integral", encode(*v.witness_integral)}};
    }
    if (!v.note.empty()) entry["note"] = v.note;
    types[std::string(name(t))] = entry;
  }
  return json{{"r", rep.r}, {"types", types}};
}

json encode(const QkReport& rep) {
  return json{{"k", rep.k},
              {"qk", encode(rep.qk)},
              {"product_s", encode(rep.product_s)},
              {"A_sq", encode(rep.A_sq)},
              {"B_sq", encode(rep.B_sq)},
              {"lhs_sq", encode(rep.lhs_sq)},
              {"rhs_sq", encode(rep.rhs_sq)},
              {"holds", rep.holds},
              {"ratio_float", rep.ratio()}};
}

json encode(const RealVariantReport& rep) {
  return json{{"k", rep.k},
              {"product_s", encode(rep.product_s)},
              {"re_qk", encode(rep.re_qk)},
              {"bound_sq", encode(rep.bound_sq)},
              {"holds", rep.holds}};
}

json encode(const ConstantBound& b) {
  return json{{"method", std::string(name(b.method))}, {"c_pow_2r", encode(b.c_pow_2r)}};
}

json encode(const SquareEstimateReport& rep) {
  return json{{"r", rep.r},
              {"bound", encode(rep.bound)},
              {"lhs_pow", encode(rep.lhs_pow)},
              {"rhs_pow", encode(rep.rhs_pow)},
              {"holds", rep.holds},
              {"ratio_float", rep.ratio_float}};
}

json encode(const IntermediateReport& rep) {
  return json{{"r", rep.r},
              {"lhs_pow", encode(rep.lhs_pow)},
              {"square_term", encode(rep.square_term)},
              {"mixed_term", encode(rep.mixed_term)},
              {"rhs", encode(rep.rhs)},
              {"holds", rep.holds}};
}

json encode(const DecouplingReport& rep) {
  return json{{"r", rep.r},
              {"bound", encode(rep.bound)},
              {"lhs_pow", encode(rep.lhs_pow)},
              {"rhs_base_lower", encode(rep.rhs_base_lower)},
              {"rhs_base_upper", encode(rep.rhs_base_upper)},
              {"exact", rep.exact},
              {"holds", rep.holds}};
}

json encode(const HaarSqfnReport& rep) {
  json diffs = json::array();
  for (const auto& d : rep.differences) diffs.push_back(encode(d));
  return json{{"depth", rep.depth},
              {"differences", diffs},
              {"reconstruction_exact", rep.reconstruction_exact},
              {"type_iv", rep.type_iv},
              {"estimate", encode(rep.estimate)},
              {"holds", rep.holds()}};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void write(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace superortho::io
