#include "dmt/witt.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace dmt {

std::string law_kind_name(LawKind k) {
  switch (k) {
    case LawKind::add: return "add";
    case LawKind::mul: return "mul";
    case LawKind::neg: return "neg";
  }
  throw std::logic_error("unreachable");
}

LawKind law_kind_from_name(const std::string& s) {
  if (s == "add") return LawKind::add;
  if (s == "mul") return LawKind::mul;
  if (s == "neg") return LawKind::neg;
  throw std::invalid_argument("unknown law kind: " + s);
}

std::vector<std::string> law_vars(long n, int blocks) {
  static const char* prefix[3] = {"x", "y", "z"};
  if (blocks < 1 || blocks > 3) throw std::invalid_argument("1..3 variable blocks supported");
  std::vector<std::string> v;
  for (int b = 0; b < blocks; ++b)
    for (long i = 0; i <= n; ++i) v.push_back(prefix[b] + std::to_string(i));
  return v;
}

MultiPoly ghost_poly(long p, long n, int block, int blocks) {
  auto vars = law_vars(n, blocks);
  MultiPoly w(vars);
  size_t base = static_cast<size_t>(block) * (n + 1);
  for (long i = 0; i <= n; ++i) {
    Exps e(vars.size(), 0);
    e[base + i] = static_cast<uint32_t>(pow_ui(BigInt(p), static_cast<unsigned long>(n - i)).get_ui());
    w.add_term(e, Rational(pow_ui(BigInt(p), static_cast<unsigned long>(i))));
  }
  return w;
}

long law_level_cap(long p) {
  switch (p) {
    case 2: return 6;
    case 3: return 4;
    case 5: return 3;
    default: return 2;
  }
}

namespace {

// extend a level-j law component to the level-i variable list
MultiPoly extend_component(const MultiPoly& poly, long j, long i, int blocks) {
  auto tvars = law_vars(i, blocks);
  std::vector<size_t> map;
  for (int b = 0; b < blocks; ++b)
    for (long t = 0; t <= j; ++t) map.push_back(static_cast<size_t>(b) * (i + 1) + t);
  return poly.remap(tvars, map);
}

}  // namespace

WittLaw generate_law(long p, long n, LawKind kind) {
  require_prime(p);
  if (n < 0) throw std::invalid_argument("law level must be >= 0");
  int blocks = kind == LawKind::neg ? 1 : 2;

  WittLaw law{p, n, kind, {}};
  // rolling powers: pw[j] = polys[j]^{p^{i-1-j}} on the previous level's vars
  std::vector<MultiPoly> pw;
  for (long i = 0; i <= n; ++i) {
    MultiPoly target = [&] {
      switch (kind) {
        case LawKind::add: return ghost_poly(p, i, 0, blocks) + ghost_poly(p, i, 1, blocks);
        case LawKind::mul: return ghost_poly(p, i, 0, blocks) * ghost_poly(p, i, 1, blocks);
        case LawKind::neg: return -ghost_poly(p, i, 0, blocks);
      }
      throw std::logic_error("unreachable");
    }();

    MultiPoly acc = target;
    BigInt pj = 1;
    for (long j = 0; j < i; ++j) {
      pw[j] = extend_component(pw[j], i - 1, i, blocks).pow(static_cast<unsigned long>(p));
      acc = acc - pw[j] * Rational(pj);
      pj *= p;
    }
    MultiPoly phi = acc.divide_by_p_power(p, i);
    if (!phi.is_integral())
      throw std::logic_error("law component came out non-integral at level " + std::to_string(i));
    pw.push_back(phi);  // p^0-th power of the new component
    law.polys.push_back(std::move(phi));
  }
  return law;
}

nlohmann::json WittLaw::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["n"] = n;
  j["kind"] = law_kind_name(kind);
  auto& arr = j["polys"] = nlohmann::json::array();
  for (const auto& poly : polys) arr.push_back(poly.to_json());
  return j;
}

WittLaw WittLaw::from_json(const nlohmann::json& j) {
  WittLaw law;
  law.p = j.at("p").get<long>();
  law.n = j.at("n").get<long>();
  law.kind = law_kind_from_name(j.at("kind").get<std::string>());
  for (const auto& pj : j.at("polys")) law.polys.push_back(MultiPoly::from_json(pj));
  return law;
}

std::string law_cache_dir() {
  if (const char* env = std::getenv("DIEUDONNE_CACHE")) return env;
  if (const char* home = std::getenv("HOME"))
    return std::string(home) + "/.cache/dieudonne-laws";
  return ".dieudonne-cache";
}

namespace {

std::string law_file_name(long p, long n, LawKind kind) {
  std::ostringstream os;
  os << "law_p" << p << "_n" << n << "_" << law_kind_name(kind) << ".json";
  return os.str();
}

std::optional<WittLaw> load_cached(long p, long n, LawKind kind) {
  namespace fs = std::filesystem;
  fs::path path = fs::path(law_cache_dir()) / law_file_name(p, n, kind);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    WittLaw law = WittLaw::from_json(j);
    if (law.p != p || law.n != n || law.kind != kind ||
        law.polys.size() != static_cast<size_t>(n) + 1)
      return std::nullopt;  // stale or corrupt; regenerate
    return law;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void store_cached(const WittLaw& law) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::path dir(law_cache_dir());
  fs::create_directories(dir, ec);
  if (ec) return;  // cache is best effort
  fs::path final_path = dir / law_file_name(law.p, law.n, law.kind);
  fs::path tmp = final_path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << law.to_json().dump(2) << "\n";
  }
  fs::rename(tmp, final_path, ec);
  if (ec) fs::remove(tmp, ec);
}

}  // namespace

const WittLaw& get_law(long p, long n, LawKind kind) {
  require_prime(p);
  if (n > law_level_cap(p))
    throw cap_error("law level " + std::to_string(n) + " exceeds cap " +
                    std::to_string(law_level_cap(p)) + " for p=" + std::to_string(p));
  static std::map<std::tuple<long, long, int>, WittLaw> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, n, static_cast<int>(kind));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  if (auto cached = load_cached(p, n, kind))
    return memo.emplace(key, std::move(*cached)).first->second;
  WittLaw law = generate_law(p, n, kind);
  store_cached(law);
  return memo.emplace(key, std::move(law)).first->second;
}

bool check_homogeneity(const WittLaw& add_law, std::string* complaint) {
  if (add_law.kind != LawKind::add)
    throw std::invalid_argument("homogeneity check applies to the addition family");
  int blocks = 2;
  for (long i = 0; i <= add_law.n; ++i) {
    std::vector<long> weights;
    for (int b = 0; b < blocks; ++b)
      for (long t = 0; t <= i; ++t)
        weights.push_back(pow_ui(BigInt(add_law.p), static_cast<unsigned long>(t)).get_si());
    long degree = pow_ui(BigInt(add_law.p), static_cast<unsigned long>(i)).get_si();
    if (!add_law.polys[i].is_weighted_homogeneous(weights, degree)) {
      if (complaint)
        *complaint = "component " + std::to_string(i) + " is not weighted-homogeneous of degree " +
                     std::to_string(degree);
      return false;
    }
  }
  return true;
}

bool ghost_identity_ok(const WittLaw& law) {
  long p = law.p, n = law.n;
  int blocks = law.kind == LawKind::neg ? 1 : 2;
  // w_n(components) as a polynomial identity
  MultiPoly lhs(law_vars(n, blocks));
  BigInt pi = 1;
  for (long i = 0; i <= n; ++i) {
    unsigned long e = pow_ui(BigInt(p), static_cast<unsigned long>(n - i)).get_ui();
    lhs = lhs + extend_component(law.polys[i], i, n, blocks).pow(e) * Rational(pi);
    pi *= p;
  }
  MultiPoly rhs = [&] {
    switch (law.kind) {
      case LawKind::add: return ghost_poly(p, n, 0, blocks) + ghost_poly(p, n, 1, blocks);
      case LawKind::mul: return ghost_poly(p, n, 0, blocks) * ghost_poly(p, n, 1, blocks);
      case LawKind::neg: return -ghost_poly(p, n, 0, blocks);
    }
    throw std::logic_error("unreachable");
  }();
  return lhs == rhs;
}

bool lower_terms_ok(const WittLaw& add_law) {
  for (long i = 1; i <= add_law.n; ++i) {
    const auto& phi = add_law.polys[i];
    MultiPoly rest = phi - MultiPoly::variable(phi.vars(), i) -
                     MultiPoly::variable(phi.vars(), 2 * i + 1);
    size_t xi = static_cast<size_t>(i), yi = static_cast<size_t>(2 * i + 1);
    for (const auto& [e, c] : rest.terms())
      if (e[xi] != 0 || e[yi] != 0) return false;
  }
  return true;
}

bool shift_compat_ok(const WittLaw& add_law) {
  for (long i = 1; i <= add_law.n; ++i) {
    auto tvars = law_vars(i - 1, 2);
    std::vector<MultiPoly> images;
    MultiPoly zero(tvars);
    // x-block: slot 0 -> 0, slot t -> x_{t-1}
    images.push_back(zero);
    for (long t = 1; t <= i; ++t) images.push_back(MultiPoly::variable(tvars, t - 1));
    images.push_back(zero);
    for (long t = 1; t <= i; ++t) images.push_back(MultiPoly::variable(tvars, i + t - 1));
    if (add_law.polys[i].substitute(images) != add_law.polys[i - 1]) return false;
  }
  return true;
}

bool symmetry_ok(const WittLaw& add_law) {
  for (long i = 0; i <= add_law.n; ++i) {
    const auto& phi = add_law.polys[i];
    std::vector<size_t> swap_map;
    for (long t = 0; t <= i; ++t) swap_map.push_back(static_cast<size_t>(i + 1 + t));
    for (long t = 0; t <= i; ++t) swap_map.push_back(static_cast<size_t>(t));
    if (phi.remap(phi.vars(), swap_map) != phi) return false;
  }
  return true;
}

bool coassociativity_ok(long p, long n) {
  const WittLaw& law = get_law(p, n, LawKind::add);
  auto tvars = law_vars(n, 3);
  // the three blocks as level-n polynomials
  auto block_var = [&](int b, long t) {
    return MultiPoly::variable(tvars, static_cast<size_t>(b) * (n + 1) + t);
  };
  // phi_j evaluated on (blockA, blockB), living in the 3-block ring
  auto phi_on = [&](long j, int ba, int bb) {
    std::vector<MultiPoly> images;
    for (long t = 0; t <= j; ++t) images.push_back(block_var(ba, t));
    for (long t = 0; t <= j; ++t) images.push_back(block_var(bb, t));
    return law.polys[j].substitute(images);
  };
  for (long i = 0; i <= n; ++i) {
    std::vector<MultiPoly> left, right;
    for (long t = 0; t <= i; ++t) left.push_back(block_var(0, t));
    for (long t = 0; t <= i; ++t) left.push_back(phi_on(t, 1, 2));
    for (long t = 0; t <= i; ++t) right.push_back(phi_on(t, 0, 1));
    for (long t = 0; t <= i; ++t) right.push_back(block_var(2, t));
    if (law.polys[i].substitute(left) != law.polys[i].substitute(right)) return false;
  }
  return true;
}

// ---- vectors ----

namespace {

void require_compatible(const WittVec& u, const WittVec& v) {
  require_same_field(*u.k, *v.k);
  if (u.a.size() != v.a.size()) throw std::invalid_argument("Witt vector level mismatch");
}

uint8_t eval_component(const MultiPoly& poly, const Field& k,
                       const std::vector<uint8_t>& values) {
  uint8_t acc = 0;
  for (const auto& [e, c] : poly.terms()) {
    uint8_t term = k.from_int(rational_mod_p(c, k.p()));
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = k.mul(term, k.pow(values[i], e[i]));
    acc = k.add(acc, term);
  }
  return acc;
}

}  // namespace

std::string WittVec::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) os << ",";
    os << k->to_string(a[i]);
  }
  os << ")";
  return os.str();
}

WittVec witt_zero(FieldPtr k, long n) { return WittVec{std::move(k), std::vector<uint8_t>(n + 1, 0)}; }

WittVec witt_one(FieldPtr k, long n) {
  WittVec u = witt_zero(std::move(k), n);
  u.a[0] = 1;
  return u;
}

namespace {

WittVec eval_binary_law(LawKind kind, const WittVec& u, const WittVec& v) {
  require_compatible(u, v);
  long n = u.level();
  const WittLaw& law = get_law(u.k->p(), n, kind);
  WittVec r{u.k, std::vector<uint8_t>(n + 1, 0)};
  for (long i = 0; i <= n; ++i) {
    std::vector<uint8_t> values;
    for (long t = 0; t <= i; ++t) values.push_back(u.a[t]);
    for (long t = 0; t <= i; ++t) values.push_back(v.a[t]);
    r.a[i] = eval_component(law.polys[i], *u.k, values);
  }
  return r;
}

}  // namespace

WittVec witt_add(const WittVec& u, const WittVec& v) { return eval_binary_law(LawKind::add, u, v); }
WittVec witt_mul(const WittVec& u, const WittVec& v) { return eval_binary_law(LawKind::mul, u, v); }

WittVec witt_neg(const WittVec& u) {
  long n = u.level();
  const WittLaw& law = get_law(u.k->p(), n, LawKind::neg);
  WittVec r{u.k, std::vector<uint8_t>(n + 1, 0)};
  for (long i = 0; i <= n; ++i) {
    std::vector<uint8_t> values(u.a.begin(), u.a.begin() + i + 1);
    r.a[i] = eval_component(law.polys[i], *u.k, values);
  }
  return r;
}

WittVec witt_sub(const WittVec& u, const WittVec& v) { return witt_add(u, witt_neg(v)); }

WittVec teichmuller(FieldPtr k, uint8_t a, long n) {
  WittVec u = witt_zero(std::move(k), n);
  u.a[0] = a;
  return u;
}

WittVec verschiebung_vec(const WittVec& u) {
  WittVec r{u.k, std::vector<uint8_t>(u.a.size(), 0)};
  for (size_t i = 1; i < u.a.size(); ++i) r.a[i] = u.a[i - 1];
  return r;
}

WittVec sigma_vec(const WittVec& u) {
  WittVec r = u;
  for (auto& c : r.a) c = u.k->frobenius(c);
  return r;
}

WittVec witt_int(FieldPtr k, long n, long c) {
  WittVec acc = witt_zero(k, n);
  WittVec one = witt_one(k, n);
  bool negate = c < 0;
  if (negate) c = -c;
  for (long i = 0; i < c; ++i) acc = witt_add(acc, one);
  return negate ? witt_neg(acc) : acc;
}

long teichmuller_lift_mod(long a, long p, long n) {
  // tau(a) = lim a^{p^k}; mod p^{n+1} the limit is reached at k = n
  BigInt mod = pow_ui(BigInt(p), static_cast<unsigned long>(n + 1));
  BigInt base(a), r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(),
           pow_ui(BigInt(p), static_cast<unsigned long>(n)).get_mpz_t(), mod.get_mpz_t());
  return r.get_si();
}

long to_residue(const WittVec& u) {
  if (!u.k->prime_field())
    throw std::invalid_argument("residue oracle is defined over prime fields only");
  long p = u.k->p(), n = u.level();
  BigInt mod = pow_ui(BigInt(p), static_cast<unsigned long>(n + 1));
  BigInt acc = 0, pi = 1;
  for (long i = 0; i <= n; ++i) {
    acc += pi * teichmuller_lift_mod(u.a[i], p, n);
    pi *= p;
  }
  return mpz_class(acc % mod).get_si();
}

WittVec from_residue(FieldPtr k, long n, long r) {
  if (!k->prime_field())
    throw std::invalid_argument("residue oracle is defined over prime fields only");
  long p = k->p();
  long mod = pow_ui(BigInt(p), static_cast<unsigned long>(n + 1)).get_si();
  r %= mod;
  if (r < 0) r += mod;
  WittVec u = witt_zero(std::move(k), n);
  for (long i = 0; i <= n; ++i) {
    long a = r % p;
    u.a[i] = static_cast<uint8_t>(a);
    long lift = teichmuller_lift_mod(a, p, n - i);
    long piece = pow_ui(BigInt(p), static_cast<unsigned long>(n - i + 1)).get_si();
    r = ((r - lift) % piece + piece) % piece;
    if (r % p != 0) throw std::logic_error("residue peeling left a non-divisible remainder");
    r /= p;
  }
  return u;
}

}  // namespace dmt
