// superortho: classification, Q_k campaigns, estimate verification and
// benchmarks over exact step-function families.
//
// Exit codes: 0 all checks pass, 1 a mathematical violation was found,
// 2 usage or input error.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superortho/classifier.hpp"
#include "superortho/error.hpp"
#include "superortho/estimates.hpp"
#include "superortho/families.hpp"
#include "superortho/io.hpp"
#include "superortho/qk.hpp"
#include "superortho/random.hpp"

namespace so = superortho;
using so::io::json;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct FamilySource {
  std::string builtin;
  std::string file;
  unsigned n = 0;
  unsigned k = 2;
  unsigned depth = 0;
  std::string root = "[0,1)";
  std::vector<std::string> g;

  void add_options(CLI::App* app) {
    app->add_option("--builtin", builtin, "haar_grid | indicator_complement | typeiv")
        ->check(CLI::IsMember({"haar_grid", "indicator_complement", "typeiv"}));
    app->add_option("--family", file, "family JSON file (members or builtin descriptor)");
    app->add_option("--n", n, "family size for indicator_complement / typeiv");
    app->add_option("--k", k, "half tuple length for typeiv");
    app->add_option("--depth", depth, "levels for haar_grid");
    app->add_option("--root", root, "root dyadic interval for haar_grid");
    app->add_option("--g", g, "per-index positive constants for typeiv")->delimiter(',');
  }

  json descriptor() const {
    if (builtin == "haar_grid") return json{{"builtin", builtin}, {"root", root}, {"depth", depth}};
    if (builtin == "indicator_complement") return json{{"builtin", builtin}, {"n", n}};
    json d{{"builtin", builtin}, {"k", k}, {"n", n}};
    if (!g.empty()) d["g"] = g;
    return d;
  }

  so::Family load() const {
    if (builtin.empty() == file.empty()) {
      throw so::ParseError("give exactly one of --builtin or --family");
    }
    return so::io::decode_family(file.empty() ? descriptor() : so::io::read_file(file));
  }
};

so::ConstantBound make_bound(unsigned r, const std::string& method, const std::string& c) {
  const so::BoundMethod m = so::parse_bound_method(method);
  if (m == so::BoundMethod::User) {
    if (c.empty()) throw so::ParseError("--constant user needs --c");
    return so::user_bound(r, so::parse_rational(c));
  }
  if (!c.empty()) throw so::ParseError("--c is only valid with --constant user");
  return so::constant_bound(r, m);
}

std::vector<so::Sequence> random_instance(so::Rng& rng, unsigned k, std::size_t dim, bool complex) {
  std::vector<so::Sequence> seqs;
  for (unsigned i = 0; i < k; ++i) seqs.push_back(rng.sequence(dim, complex));
  return seqs;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

so::Family first_members(const so::Family& fam, std::size_t n) {
  std::vector<so::Family::Member> members(fam.members().begin(), fam.members().begin() + n);
  return so::Family(std::move(members));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact superorthogonality and square function checks"};
  app.require_subcommand(1);

  // classify
  auto* classify = app.add_subcommand("classify", "classify a family by superorthogonality type");
  FamilySource cls_src;
  cls_src.add_options(classify);
  unsigned cls_r = 2;
  std::string cls_types = "I*,I,II,III,IV";
  unsigned cls_threads = 0;
  std::string cls_out;
  classify->add_option("--r", cls_r, "tuples have length 2r");
  classify->add_option("--types", cls_types, "comma list of I*,I,II,III,IV");
  classify->add_option("--threads", cls_threads, "worker threads (0: SUPERORTHO_THREADS or all cores)");
  classify->add_option("--out", cls_out, "report path (default stdout)");

  // qk
  auto* qk = app.add_subcommand("qk", "distinct-index sums Q_k");
  qk->require_subcommand(1);
  unsigned qk_k = 0;
  std::uint64_t qk_trials = 1000;
  std::uint64_t qk_seed = 42;
  std::size_t qk_dim = 6;
  bool qk_complex = false;
  std::string qk_file;
  std::string qk_method = "partition";
  std::string qk_out;
  auto* qk_check = qk->add_subcommand("check", "randomized campaign for the Q_k inequality");
  auto* qk_equiv = qk->add_subcommand("equiv", "randomized agreement of the three Q_k methods");
  for (auto* sub : {qk_check, qk_equiv}) {
    sub->add_option("--k", qk_k, "number of sequences")->required();
    sub->add_option("--trials", qk_trials, "random instances");
    sub->add_option("--seed", qk_seed, "mt19937_64 seed");
    sub->add_option("--dim", qk_dim, "length |J| of every sequence");
    sub->add_flag("--complex", qk_complex, "Gaussian-rational entries");
    sub->add_option("--out", qk_out, "report path (default stdout)");
  }
  auto* qk_eval = qk->add_subcommand("eval", "evaluate Q_k for a sequence-set file");
  qk_eval->add_option("--file", qk_file, "sequence-set JSON")->required();
  qk_eval->add_option("--method", qk_method, "brute | recursive | partition");
  qk_eval->add_option("--out", qk_out, "report path (default stdout)");

  // construct
  auto* construct = app.add_subcommand("construct", "write a builtin family as JSON");
  FamilySource con_src;
  std::string con_out;
  construct->add_option("--kind", con_src.builtin, "typeiv | haar_grid | indicator_complement")
      ->required()
      ->check(CLI::IsMember({"haar_grid", "indicator_complement", "typeiv"}));
  construct->add_option("--n", con_src.n, "family size");
  construct->add_option("--k", con_src.k, "half tuple length for typeiv");
  construct->add_option("--depth", con_src.depth, "levels for haar_grid");
  construct->add_option("--root", con_src.root, "root dyadic interval for haar_grid");
  construct->add_option("--g", con_src.g, "per-index positive constants for typeiv")->delimiter(',');
  construct->add_option("--out", con_out, "family path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "verify an L^{2r} estimate exactly");
  verify->require_subcommand(1);
  FamilySource ver_src;
  unsigned ver_r = 2;
  std::string ver_constant = "paper";
  std::string ver_c;
  std::string ver_fn;
  std::string ver_out;
  unsigned ver_bits = 512;
  auto* v_square = verify->add_subcommand("square", "square function estimate");
  auto* v_inter = verify->add_subcommand("intermediate", "integrated pointwise bound");
  auto* v_dec = verify->add_subcommand("decoupling", "l^2 decoupling corollary");
  auto* v_haar = verify->add_subcommand("haar-sqfn", "dyadic martingale square function");
  for (auto* sub : {v_square, v_inter, v_dec, v_haar}) {
    sub->add_option("--r", ver_r, "exponent 2r");
    sub->add_option("--out", ver_out, "report path (default stdout)");
    if (sub != v_inter) {
      sub->add_option("--constant", ver_constant, "paper | optimized | user");
      sub->add_option("--c", ver_c, "C^{2r} for --constant user");
    }
    if (sub == v_haar) {
      sub->add_option("--fn", ver_fn, "step function JSON")->required();
      sub->add_option("--depth", ver_src.depth, "grid depth")->required();
      sub->add_option("--root", ver_src.root, "root dyadic interval");
    } else {
      ver_src.add_options(sub);
    }
  }
  v_dec->add_option("--max-bits", ver_bits, "root refinement budget");

  // bench
  auto* bench = app.add_subcommand("bench", "timings with result cross-checks");
  bench->require_subcommand(1);
  std::vector<std::size_t> bench_sizes;
  unsigned bench_r = 2;
  std::size_t bench_naive_max = 12;
  auto* b_classify = bench->add_subcommand("classify", "Type IV class enumeration vs naive tuples");
  b_classify->add_option("--sizes", bench_sizes, "family sizes")->required()->delimiter(',');
  b_classify->add_option("--r", bench_r, "tuples have length 2r");
  b_classify->add_option("--naive-max", bench_naive_max, "largest size also run naively");
  unsigned bench_k = 4;
  std::vector<std::size_t> bench_dims;
  std::uint64_t bench_seed = 42;
  std::size_t bench_brute_max = 16;
  auto* b_qk = bench->add_subcommand("qk", "qk_partition vs qk_bruteforce");
  b_qk->add_option("--k", bench_k, "number of sequences");
  b_qk->add_option("--dims", bench_dims, "sequence lengths")->required()->delimiter(',');
  b_qk->add_option("--seed", bench_seed, "mt19937_64 seed");
  b_qk->add_option("--brute-max", bench_brute_max, "largest length also run by brute force");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*classify) {
      if (cls_r < 1) throw so::ParseError("--r must be >= 1");
      const so::Family fam = cls_src.load();
      const auto types = so::parse_super_types(cls_types);
      so::ClassifyOptions opts;
      opts.threads = cls_threads;
      const auto rep = so::classify(fam, cls_r, types, opts);
      so::io::write(so::io::encode(fam, rep), cls_out);
      return rep.all_hold() ? kPass : kViolation;
    }

    if (*qk_eval) {
      const auto seqs = so::io::decode_sequences(so::io::read_file(qk_file));
      const so::QkMethod method = so::parse_qk_method(qk_method);
      json out{{"k", seqs.size()}, {"method", qk_method}, {"qk", so::io::encode(so::qk(seqs, method))}};
      so::io::write(out, qk_out);
      return kPass;
    }

    if (*qk_check || *qk_equiv) {
      const bool check = qk_check->parsed();
      if (check && qk_k < 2) throw so::ParseError("qk check needs --k >= 2");
      if (qk_k < 1) throw so::ParseError("--k must be >= 1");
      if (qk_dim < 1) throw so::ParseError("--dim must be >= 1");
      so::Rng rng(qk_seed);
      std::uint64_t violations = 0;
      double max_ratio = 0;
      json first = nullptr;
      for (std::uint64_t t = 0; t < qk_trials; ++t) {
        const auto seqs = random_instance(rng, qk_k, qk_dim, qk_complex);
        if (check) {
          const auto rep = so::check_inequality(seqs);
          max_ratio = std::max(max_ratio, rep.ratio());
          if (!rep.holds) {
            ++violations;
            if (first.is_null()) first = json{{"trial", t}, {"instance", so::io::encode_sequences(seqs)}, {"report", so::io::encode(rep)}};
          }
        } else {
          const so::Scalar a = so::qk_bruteforce(seqs);
          const so::Scalar b = so::qk_recursive(seqs);
          const so::Scalar c = so::qk_partition(seqs);
          if (!(a == b && b == c)) {
            ++violations;
            if (first.is_null()) first = json{{"trial", t}, {"instance", so::io::encode_sequences(seqs)}};
          }
        }
      }
      json out{{"mode", check ? "check" : "equiv"}, {"k", qk_k},        {"trials", qk_trials},
               {"seed", qk_seed},                   {"dim", qk_dim},    {"complex", qk_complex},
               {"violations", violations}};
      if (check) out["max_ratio"] = max_ratio;
      out["first_violation"] = first;
      so::io::write(out, qk_out);
      return violations == 0 ? kPass : kViolation;
    }

    if (*construct) {
      so::io::write(so::io::encode(so::io::decode_family(con_src.descriptor())), con_out);
      return kPass;
    }

    if (*v_square || *v_inter || *v_dec || *v_haar) {
      if (ver_r < 1) throw so::ParseError("--r must be >= 1");
      json out;
      bool holds = false;
      if (*v_haar) {
        const so::StepFunction f = so::io::decode_step_function(so::io::read_file(ver_fn));
        const auto root = so::DyadicInterval::parse(ver_src.root);
        const auto rep = so::verify_haar_sqfn(f, root, ver_src.depth, ver_r,
                                              make_bound(ver_r, ver_constant, ver_c));
        out = so::io::encode(rep);
        holds = rep.holds();
      } else {
        const so::Family fam = ver_src.load();
        if (*v_inter) {
          const auto rep = so::verify_intermediate(fam, ver_r);
          out = so::io::encode(rep);
          holds = rep.holds;
        } else if (*v_square) {
          const auto rep = so::verify_square_estimate(fam, ver_r, make_bound(ver_r, ver_constant, ver_c));
          out = so::io::encode(rep);
          holds = rep.holds;
        } else {
          const auto rep = so::verify_decoupling(fam, ver_r, make_bound(ver_r, ver_constant, ver_c), ver_bits);
          out = so::io::encode(rep);
          holds = rep.holds;
        }
      }
      so::io::write(out, ver_out);
      return holds ? kPass : kViolation;
    }

    if (*b_classify) {
      if (bench_sizes.empty()) throw so::ParseError("--sizes is empty");
      if (bench_r < 1) throw so::ParseError("--r must be >= 1");
      std::size_t largest = *std::max_element(bench_sizes.begin(), bench_sizes.end());
      unsigned depth = 1;
      while ((std::size_t{1} << depth) - 1 < largest) ++depth;
      const so::Family grid = so::haar_grid({0, 0}, depth);
      const so::SuperType iv[] = {so::SuperType::IV};
      bool agree = true;
      json rows = json::array();
      for (std::size_t n : bench_sizes) {
        const so::Family fam = first_members(grid, n);
        auto start = std::chrono::steady_clock::now();
        const auto rep = so::classify(fam, bench_r, iv);
        const double fast = seconds_since(start);
        json row{{"n", n},
                 {"classes", rep.verdicts.at(so::SuperType::IV).classes_checked},
                 {"holds", rep.all_hold()},
                 {"seconds", fast}};
        if (n <= bench_naive_max) {
          start = std::chrono::steady_clock::now();
          const auto naive = so::classify_naive(fam, bench_r, iv);
          row["naive_seconds"] = seconds_since(start);
          row["naive_agrees"] = naive.all_hold() == rep.all_hold();
          agree = agree && naive.all_hold() == rep.all_hold();
        }
        rows.push_back(row);
      }
      so::io::write(json{{"bench", "classify"}, {"r", bench_r}, {"family", "haar_grid prefix"}, {"rows", rows}}, "");
      return agree ? kPass : kViolation;
    }

    if (*b_qk) {
      if (bench_dims.empty()) throw so::ParseError("--dims is empty");
      if (bench_k < 1) throw so::ParseError("--k must be >= 1");
      so::Rng rng(bench_seed);
      bool agree = true;
      json rows = json::array();
      for (std::size_t dim : bench_dims) {
        const auto seqs = random_instance(rng, bench_k, dim, true);
        auto start = std::chrono::steady_clock::now();
        const so::Scalar part = so::qk_partition(seqs);
        json row{{"dim", dim}, {"partition_seconds", seconds_since(start)}};
        if (dim <= bench_brute_max) {
          start = std::chrono::steady_clock::now();
          const so::Scalar brute = so::qk_bruteforce(seqs);
          row["brute_seconds"] = seconds_since(start);
          row["agrees"] = brute == part;
          agree = agree && brute == part;
        }
        rows.push_back(row);
      }
      so::io::write(json{{"bench", "qk"}, {"k", bench_k}, {"seed", bench_seed}, {"rows", rows}}, "");
      return agree ? kPass : kViolation;
    }
  } catch (const so::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
