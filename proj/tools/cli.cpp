#include "cli.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmt/battery.hpp"
#include "dmt/dieudonne.hpp"
#include "dmt/diffops.hpp"
#include "dmt/duality.hpp"
#include "dmt/numeric.hpp"
#include "dmt/scheme.hpp"
#include "dmt/witt.hpp"

namespace dmt {
namespace {

using nlohmann::json;

// invariants that walk subgroup lattices are only printed below this dimension
constexpr size_t kInvariantPrintCap = 128;

long parse_long_str(const std::string& s, const char* what) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw std::invalid_argument(std::string(what) + ": '" + s + "' is not an integer");
  return v;
}

std::vector<uint8_t> parse_digits(const std::string& s, long p, long n, const char* side) {
  std::vector<uint8_t> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    long v = parse_long_str(tok, side);
    if (v < 0 || v >= p)
      throw std::invalid_argument(std::string(side) + ": digit " + tok + " is outside [0, " +
                                  std::to_string(p) + ")");
    out.push_back(static_cast<uint8_t>(v));
  }
  if (static_cast<long>(out.size()) != n + 1)
    throw std::invalid_argument(std::string(side) + ": expected " + std::to_string(n + 1) +
                                " comma-separated digits, got " + std::to_string(out.size()));
  return out;
}

std::string join_digits(const std::vector<uint8_t>& a) {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s;
}

// law components print highest weight first, x before y within a level
std::string law_poly_display(const MultiPoly& poly, long p, long level, int blocks) {
  long nv = level + 1;
  std::vector<long> w;
  for (int b = 0; b < blocks; ++b) {
    long pw = 1;
    for (long j = 0; j < nv; ++j, pw *= p) w.push_back(pw);
  }
  std::vector<size_t> seq;
  for (long j = level; j >= 0; --j)
    for (int b = 0; b < blocks; ++b) seq.push_back(static_cast<size_t>(b * nv + j));
  return poly.to_display_string(w, seq);
}

std::string elem_str(const Algebra& R, const SparseElem& e) {
  std::string s = R.to_string(e);
  return s.empty() ? "0" : s;
}

// functionals on a ring display in the dual coordinates, marked with a hat
std::string functional_str(const Algebra& R, const AlgElem& a) {
  const Field& k = *R.field();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    if (!first) os << " + ";
    first = false;
    if (a[i] != 1) os << k.to_string(a[i]) << "*";
    os << R.basis_name(i) << "^";
  }
  return first ? "0" : os.str();
}

SchemePtr parse_scheme_kind(const std::string& kind, const FieldPtr& k) {
  long p = k->p();
  if (size_t cross = kind.find('*'); cross != std::string::npos)
    return product(parse_scheme_kind(kind.substr(0, cross), k),
                   parse_scheme_kind(kind.substr(cross + 1), k));
  if (kind == "ep") return build_ep(k);
  if (kind.rfind("dual:", 0) == 0) return cartier_dual(parse_scheme_kind(kind.substr(5), k));
  if (kind.rfind("alpha:", 0) == 0) {
    long order = parse_long_str(kind.substr(6), "alpha order");
    long h = 0, q = 1;
    while (q < order) {
      q *= p;
      ++h;
    }
    if (q != order || h == 0)
      throw std::invalid_argument("alpha:" + std::to_string(order) +
                                  " needs a positive power of p=" + std::to_string(p));
    return build_alpha(k, h);
  }
  if (kind.rfind("witt:", 0) == 0) {
    std::string body = kind.substr(5);
    size_t comma = body.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("witt kinds look like witt:n,m");
    long n = parse_long_str(body.substr(0, comma), "witt n");
    long m = parse_long_str(body.substr(comma + 1), "witt m");
    if (n < 0 || m < 0) throw std::invalid_argument("witt:n,m needs n, m >= 0");
    return build_witt(k, n, m);
  }
  throw std::invalid_argument("unknown scheme kind '" + kind +
                              "'; expected alpha:N, witt:n,m, ep, dual:<kind> or a '*' product");
}

struct HopfStatus {
  bool checked = true;
  bool ok = true;
  std::string note;
};

HopfStatus hopf_status(const Scheme& G) {
  HopfStatus st;
  try {
    st.note = verify_hopf(G);
    st.ok = st.note.empty();
  } catch (const cap_error& e) {
    st.checked = false;
    st.note = e.what();
  }
  return st;
}

void print_scheme_text(std::ostream& out, const SchemePtr& G, const HopfStatus& st) {
  long p = G->field()->p();
  out << "scheme " << G->name << " over F_" << p << "\n";
  out << "dimension " << G->dim() << "\n";
  out << "length " << length(*G) << "\n";
  if (G->dim() <= kInvariantPrintCap) {
    out << "a-number " << a_number(*G) << "\n";
    out << "lie dimension " << lie_dim(*G) << "\n";
  }
  out << "cotangent dimension " << cotangent_dim(*G) << "\n";
  if (auto mono = G->monomial_ring()) {
    out << "ring F_" << p << "[";
    for (size_t v = 0; v < mono->nvars(); ++v) out << (v ? ", " : "") << mono->var_names()[v];
    out << "] with";
    for (size_t v = 0; v < mono->nvars(); ++v)
      out << (v ? ", " : " ") << mono->var_names()[v] << "^" << mono->bounds()[v] << " = 0";
    out << "\n";
    if (G->comul.generator_form()) {
      const auto& imgs = G->comul.generator_images();
      for (size_t v = 0; v < mono->nvars(); ++v)
        out << "comul " << mono->var_names()[v] << " = " << elem_str(*G->square, imgs[v]) << "\n";
    }
  } else {
    out << "ring presented by structure constants on " << G->dim() << " basis vectors\n";
  }
  if (st.checked)
    out << "hopf axioms: " << (st.ok ? "pass" : "FAIL " + st.note) << "\n";
  else
    out << "hopf axioms: skipped (" << st.note << ")\n";
}

json scheme_json(const SchemePtr& G, const HopfStatus& st) {
  json j;
  j["name"] = G->name;
  j["p"] = G->field()->p();
  j["dimension"] = G->dim();
  j["length"] = length(*G);
  if (G->dim() <= kInvariantPrintCap) {
    j["a_number"] = a_number(*G);
    j["lie"] = lie_dim(*G);
  }
  j["cotangent"] = cotangent_dim(*G);
  if (auto mono = G->monomial_ring()) {
    j["ring"] = {{"vars", mono->var_names()}, {"bounds", mono->bounds()}};
    if (G->comul.generator_form()) {
      json cm = json::object();
      const auto& imgs = G->comul.generator_images();
      for (size_t v = 0; v < mono->nvars(); ++v)
        cm[mono->var_names()[v]] = elem_str(*G->square, imgs[v]);
      j["comul"] = cm;
    }
  }
  j["hopf"] = {{"checked", st.checked}, {"pass", st.ok}, {"note", st.note}};
  return j;
}

// "A/(F^2,V^2)" -> "F^2, V^2"
std::string relations_of(const std::string& block) {
  std::string s = block;
  if (s.rfind("A/(", 0) == 0 && !s.empty() && s.back() == ')') s = s.substr(3, s.size() - 4);
  std::string out;
  for (char c : s) {
    out += c;
    if (c == ',') out += ' ';
  }
  return out;
}

std::vector<SchemePtr> catalog_candidates(const FieldPtr& k, size_t dim) {
  long p = k->p();
  std::vector<SchemePtr> out;
  auto keep = [&](SchemePtr G) {
    if (G->dim() == dim) out.push_back(std::move(G));
  };
  auto pw = [&](long e) {
    long q = 1;
    for (long i = 0; i < e; ++i) {
      q *= p;
      if (q > 4096) return -1L;
    }
    return q;
  };
  keep(build_ep(k));
  for (long h = 1; h <= 4; ++h)
    if (pw(h) == static_cast<long>(dim)) keep(build_alpha(k, h));
  for (long n = 0; n <= 2; ++n)
    for (long m = 0; m <= 2; ++m) {
      if (n == 0 && m == 0) continue;
      if (pw((n + 1) * (m + 1)) == static_cast<long>(dim)) keep(build_witt(k, n, m));
    }
  for (long h1 = 1; h1 <= 2; ++h1)
    for (long h2 = h1; h2 <= 2; ++h2)
      if (pw(h1 + h2) == static_cast<long>(dim))
        keep(product(build_alpha(k, h1), build_alpha(k, h2)));
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact Witt vector and Dieudonne module calculator"};
  app.require_subcommand(1);
  app.footer("the law cache directory is taken from DIEUDONNE_CACHE when set");

  std::string format;
  bool strict = false;
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--strict", strict, "exit 1 when an embedded verification fails");

  // each leaf callback only records what to run; work happens after the parse
  // so every exception funnels through one exit-code map
  std::function<int()> action;
  auto fmt = [&format](const char* def) { return format.empty() ? std::string(def) : format; };

  auto* witt = app.add_subcommand("witt", "Witt vector laws and arithmetic");
  witt->fallthrough();
  witt->require_subcommand(1);

  long law_p = 0, law_n = 0;
  std::string law_kind = "add";
  bool law_force = false;
  auto* law_cmd = witt->add_subcommand("law", "print a coordinate law, one polynomial per level");
  law_cmd->fallthrough();
  law_cmd->add_option("--p", law_p, "prime")->required();
  law_cmd->add_option("--n", law_n, "level; vectors have n+1 components")->required();
  law_cmd->add_option("--kind", law_kind, "add, mul or neg")
      ->check(CLI::IsMember({"add", "mul", "neg"}));
  law_cmd->add_flag("--force", law_force, "generate past the per-prime level cap");
  law_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(law_p);
      if (law_n < 0) throw std::invalid_argument("n must be nonnegative");
      LawKind kk = law_kind == "add"   ? LawKind::add
                   : law_kind == "mul" ? LawKind::mul
                                       : LawKind::neg;
      WittLaw forced;
      const WittLaw* L;
      if (law_n > law_level_cap(law_p)) {
        if (!law_force)
          throw cap_error("level " + std::to_string(law_n) + " is past the cap " +
                          std::to_string(law_level_cap(law_p)) + " for p=" +
                          std::to_string(law_p) + "; pass --force to generate it anyway");
        forced = generate_law(law_p, law_n, kk);
        L = &forced;
      } else {
        L = &get_law(law_p, law_n, kk);
      }
      if (fmt("text") == "json") {
        out << L->to_json().dump(2) << "\n";
      } else {
        const char* head = kk == LawKind::add ? "phi" : kk == LawKind::mul ? "psi" : "nu";
        int blocks = kk == LawKind::neg ? 1 : 2;
        for (long i = 0; i <= law_n; ++i)
          out << head << "_" << i << " = " << law_poly_display(L->polys[i], law_p, i, blocks)
              << "\n";
      }
      return 0;
    };
  });

  long ev_p = 0, ev_n = 0;
  std::string ev_lhs, ev_rhs, ev_op = "add";
  auto* eval_cmd = witt->add_subcommand("eval", "combine two Witt vectors componentwise");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--p", ev_p, "prime")->required();
  eval_cmd->add_option("--n", ev_n, "level; vectors have n+1 components")->required();
  eval_cmd->add_option("--lhs", ev_lhs, "left operand, comma-separated digits")->required();
  eval_cmd->add_option("--rhs", ev_rhs, "right operand, comma-separated digits")->required();
  eval_cmd->add_option("--op", ev_op, "add or mul")->check(CLI::IsMember({"add", "mul"}));
  eval_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(ev_p);
      if (ev_n < 0) throw std::invalid_argument("n must be nonnegative");
      FieldPtr k = Field::make(ev_p);
      WittVec u{k, parse_digits(ev_lhs, ev_p, ev_n, "lhs")};
      WittVec v{k, parse_digits(ev_rhs, ev_p, ev_n, "rhs")};
      WittVec r = ev_op == "add" ? witt_add(u, v) : witt_mul(u, v);
      if (fmt("text") == "json") {
        json j{{"p", ev_p},
               {"n", ev_n},
               {"op", ev_op},
               {"lhs", std::vector<int>(u.a.begin(), u.a.end())},
               {"rhs", std::vector<int>(v.a.begin(), v.a.end())},
               {"result", std::vector<int>(r.a.begin(), r.a.end())}};
        out << j.dump(2) << "\n";
      } else {
        out << join_digits(r.a) << "\n";
      }
      return 0;
    };
  });

  auto* scheme = app.add_subcommand("scheme", "finite group scheme constructions");
  scheme->fallthrough();
  scheme->require_subcommand(1);

  long sb_p = 0;
  std::string sb_kind;
  auto* build_cmd = scheme->add_subcommand("build", "construct a scheme and print its Hopf data");
  build_cmd->fallthrough();
  build_cmd->add_option("--kind", sb_kind, "alpha:N, witt:n,m, ep, dual:<kind> or a '*' product")
      ->required();
  build_cmd->add_option("--p", sb_p, "prime")->required();
  build_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(sb_p);
      SchemePtr G = parse_scheme_kind(sb_kind, Field::make(sb_p));
      HopfStatus st = hopf_status(*G);
      if (fmt("text") == "json")
        out << scheme_json(G, st).dump(2) << "\n";
      else
        print_scheme_text(out, G, st);
      return strict && st.checked && !st.ok ? 1 : 0;
    };
  });

  auto* dieu = app.add_subcommand("dieudonne", "Dieudonne modules of schemes");
  dieu->fallthrough();
  dieu->require_subcommand(1);

  long en_p = 0;
  std::string en_kind;
  auto* enum_cmd = dieu->add_subcommand("enumerate", "list the module of a scheme");
  enum_cmd->fallthrough();
  enum_cmd->add_option("--scheme", en_kind, "scheme kind, as in scheme build")->required();
  enum_cmd->add_option("--p", en_p, "prime")->required();
  enum_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(en_p);
      SchemePtr G = parse_scheme_kind(en_kind, Field::make(en_p));
      DieudonneModule M = enumerate_D(G);
      std::optional<ModulePresentation> pres;
      std::string skip;
      try {
        pres = module_presentation(M);
      } catch (const cap_error& e) {
        skip = e.what();
      }
      if (fmt("text") == "json") {
        json j{{"scheme", G->name}, {"p", en_p}, {"elements", M.size()}, {"level", M.level()}};
        if (pres) {
          j["cyclic"] = pres->generators == 1;
          j["display"] = pres->display;
          j["generators"] = json::array();
          for (size_t i = 0; i < pres->generators; ++i)
            j["generators"].push_back({{"element", functional_str(*G->ring, pres->generator_elems[i])},
                                       {"block", pres->blocks[i]}});
        } else {
          j["presentation_note"] = skip;
        }
        out << j.dump(2) << "\n";
      } else {
        out << M.size() << " elements; ";
        if (pres) {
          if (pres->generators == 1)
            out << "cyclic; relations " << relations_of(pres->blocks[0]);
          else
            out << pres->generators << " generators; " << pres->display;
        } else {
          out << "presentation skipped (" << skip << ")";
        }
        out << "\n";
        out << "level " << M.level() << "\n";
        if (pres)
          for (size_t i = 0; i < pres->generators; ++i)
            out << "generator " << functional_str(*G->ring, pres->generator_elems[i]) << ": "
                << pres->blocks[i] << "\n";
      }
      return 0;
    };
  });

  long in_p = 0;
  std::string in_text;
  auto* inv_cmd = dieu->add_subcommand("inverse", "realize a module presentation as a scheme");
  inv_cmd->fallthrough();
  inv_cmd->add_option("--module", in_text, "presentation, e.g. \"A/(F-V,p)\" or \"(A/(F,V))^2\"")
      ->required();
  inv_cmd->add_option("--p", in_p, "prime")->required();
  inv_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(in_p);
      FieldPtr k = Field::make(in_p);
      ParsedModule pm = parse_module_text(in_text);
      long len = parsed_module_length(pm, in_p);
      SchemePtr H = inverse_functor(pm, k);
      HopfStatus st = hopf_status(*H);
      std::optional<bool> round_trip;
      long msize = 1;
      for (long i = 0; i < len && msize <= 64; ++i) msize *= in_p;
      if (msize <= 64) round_trip = modules_isomorphic(pm, enumerate_D(H));
      std::optional<std::string> match;
      if (H->dim() <= 81)
        for (const SchemePtr& cand : catalog_candidates(k, H->dim()))
          if (is_isomorphic_small(H, cand)) {
            match = cand->name;
            break;
          }
      if (fmt("text") == "json") {
        json j{{"module", module_text(pm)}, {"p", in_p}, {"length", len}};
        j["scheme"] = scheme_json(H, st);
        if (round_trip) j["round_trip"] = *round_trip;
        if (match) j["isomorphic_to"] = *match;
        out << j.dump(2) << "\n";
      } else {
        out << "module " << module_text(pm) << " over F_" << in_p << ": length " << len << "\n";
        print_scheme_text(out, H, st);
        if (round_trip) out << "round trip D(inverse) matches: " << (*round_trip ? "yes" : "NO") << "\n";
        if (match) out << "isomorphic to " << *match << "\n";
      }
      bool failed = (st.checked && !st.ok) || (round_trip && !*round_trip);
      return strict && failed ? 1 : 0;
    };
  });

  auto* dual = app.add_subcommand("dual", "Cartier duality data");
  dual->fallthrough();
  dual->require_subcommand(1);

  long ds_p = 0, ds_n = 0, ds_m = 0;
  auto* std_cmd = dual->add_subcommand("standard", "the standard functional and the duality isomorphism");
  std_cmd->fallthrough();
  std_cmd->add_option("--p", ds_p, "prime")->required();
  std_cmd->add_option("--n", ds_n, "Frobenius height index of witt:n,m")->required();
  std_cmd->add_option("--m", ds_m, "Verschiebung height index of witt:n,m")->required();
  std_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(ds_p);
      if (ds_n < 0 || ds_m < 0) throw std::invalid_argument("n and m must be nonnegative");
      FieldPtr k = Field::make(ds_p);
      SchemePtr G = build_witt(k, ds_n, ds_m);
      AlgElem y = standard_functional(*G);
      CheckReport gen = verify_standard_is_dieudonne(k, ds_n, ds_m);
      SchemeHom iso = standard_iso(k, ds_n, ds_m);
      CheckReport ic = standard_iso_check(k, ds_n, ds_m);
      auto mono = iso.target->monomial_ring();
      const auto& imgs = iso.pullback.generator_images();
      if (fmt("text") == "json") {
        json im = json::object();
        for (size_t v = 0; v < mono->nvars(); ++v)
          im[mono->var_names()[v]] = elem_str(*iso.source->ring, imgs[v]);
        json j{{"scheme", G->name},
               {"p", ds_p},
               {"functional", functional_str(*G->ring, y)},
               {"generator_check", {{"pass", gen.pass}, {"counterexample", gen.counterexample}}},
               {"iso",
                {{"source", iso.source->name},
                 {"target", iso.target->name},
                 {"images", im},
                 {"pass", ic.pass}}}};
        out << j.dump(2) << "\n";
      } else {
        out << "standard functional on " << G->name << " over F_" << ds_p << "\n";
        out << "y = " << functional_str(*G->ring, y) << "\n";
        out << "dieudonne generator: " << (gen.pass ? "PASS" : "FAIL " + gen.counterexample)
            << "\n";
        out << "isomorphism " << iso.source->name << " -> " << iso.target->name << "\n";
        for (size_t v = 0; v < mono->nvars(); ++v)
          out << mono->var_names()[v] << " -> " << elem_str(*iso.source->ring, imgs[v]) << "\n";
        out << "bijective: " << (ic.pass ? "PASS" : "FAIL " + ic.counterexample) << "\n";
      }
      return strict && !(gen.pass && ic.pass) ? 1 : 0;
    };
  });

  long la_p = 0, la_r = 0;
  auto* lambda_cmd = app.add_subcommand("lambda", "print a Leibniz law for divided-power operators");
  lambda_cmd->fallthrough();
  lambda_cmd->add_option("--p", la_p, "prime")->required();
  lambda_cmd->add_option("--r", la_r, "law level")->required();
  lambda_cmd->callback([&] {
    action = [&]() -> int {
      require_prime(la_p);
      if (la_r < 0) throw std::invalid_argument("r must be nonnegative");
      const LambdaLaw& L = lambda_poly(la_p, la_r);
      if (fmt("text") == "json") {
        json j{{"p", la_p}, {"r", la_r}, {"poly", L.poly.to_json()}};
        out << j.dump(2) << "\n";
      } else {
        out << "lambda_" << la_r << " = " << law_poly_display(L.poly, la_p, la_r, 2) << "\n";
      }
      return 0;
    };
  });

  std::string vf_suite;
  long vf_p = 0, vf_n = -1, vf_m = -1;
  auto* verify_cmd = app.add_subcommand("verify", "run a named check suite");
  verify_cmd->fallthrough();
  verify_cmd->add_option("suite", vf_suite, "ghost, hopf, dieudonne, duality, diffops or all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--p", vf_p, "restrict to one prime");
  verify_cmd->add_option("--n", vf_n, "restrict to one level or Frobenius index");
  verify_cmd->add_option("--m", vf_m, "restrict to one Verschiebung index");
  verify_cmd->callback([&] {
    action = [&]() -> int {
      VerifyOptions opt;
      opt.p = vf_p;
      opt.n = vf_n;
      opt.m = vf_m;
      SuiteResult res = run_suite(vf_suite, opt);
      if (fmt("json") == "json") {
        out << res.to_json().dump(2) << "\n";
      } else {
        size_t failures = 0;
        for (const auto& r : res.reports) {
          out << (r.pass ? "PASS " : "FAIL ") << r.check;
          if (!r.pass && !r.counterexample.empty()) out << ": " << r.counterexample;
          if (!r.note.empty()) out << " (" << r.note << ")";
          out << "\n";
          if (!r.pass) ++failures;
        }
        out << "suite " << res.suite << ": " << res.reports.size() << " checks, " << failures
            << " failures\n";
      }
      return res.pass() ? 0 : 1;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  if (!action) {
    err << "missing subcommand\n";
    return 2;
  }
  try {
    return action();
  } catch (const cap_error& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dmt
