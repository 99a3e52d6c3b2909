// coindex: batch front end. Every run prints one JSON document (or CSV for
// count sweeps). Exit 0 ok, 2 verification failure, 1 usage or shape error.

#include <boost/version.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coindex/io.hpp"
#include "coindex/verify.hpp"

using namespace coindex;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error("usage", what) {}
};

// Resource cap override shared by enumeration node budgets and cubical cell caps.
std::uint64_t resource_cap(std::uint64_t fallback) {
  if (const char* env = std::getenv("COINDEX_RESOURCE_CAP")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw UsageError("COINDEX_RESOURCE_CAP must be a positive integer");
    return v;
  }
  return fallback;
}

EnumerateOptions enum_opts() {
  EnumerateOptions o;
  o.node_cap = resource_cap(o.node_cap);
  return o;
}

std::string timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream os;
  os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json versions() {
  return Json{{"coindex", kVersion},
              {"boost", BOOST_LIB_VERSION},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"cli11", CLI11_VERSION}};
}

// Family options shared by count / enumerate / orbits.
struct FamilyArgs {
  std::string family = "Sigma";
  std::string m = "1";
  std::string alphabet;
  std::string delta = "1/2";
  int q = 8;
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-', 1);
    try {
      if (dash != std::string::npos) {
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw UsageError(std::string("malformed ") + what + " list '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

SubshiftSpec make_spec(const std::string& family, int m, const std::string& alphabet, const std::string& delta, int q) {
  if (family == "Sigma") return SubshiftSpec::sigma(m);
  if (family == "XGm") {
    if (alphabet.empty()) throw UsageError("family XGm needs --alphabet");
    return SubshiftSpec::xgm(Alphabet::parse(alphabet), m, parse_rational(delta));
  }
  if (family == "Zcal") return SubshiftSpec::zcal(q);
  if (family == "Ycal") return SubshiftSpec::ycal(q);
  throw UsageError("unknown family '" + family + "' (expected Sigma, XGm, Zcal or Ycal)");
}

bool family_uses_m(const std::string& family) { return family == "Sigma" || family == "XGm"; }

// "Sigma:m=2,p=7", "Zcal:q=8,p=5", "XGm:alphabet=S:q=8,m=1,delta=1/2,p=3"
struct JoinFactor {
  SubshiftSpec spec;
  unsigned p;
  std::string text;
};

JoinFactor parse_join_of(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    // Values may contain ':' and '=' (alphabets), so split on ',' and the first '='.
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("malformed --join-of item '" + item + "'");
      const auto key = item.substr(0, eq);
      if (key != "m" && key != "p" && key != "q" && key != "alphabet" && key != "delta")
        throw UsageError("unknown --join-of key '" + key + "'");
      kv[key] = item.substr(eq + 1);
    }
  }
  if (!kv.count("p")) throw UsageError("--join-of needs p=<prime>");
  auto num = [&](const char* k, int fallback) {
    if (!kv.count(k)) return fallback;
    try {
      return std::stoi(kv[k]);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("malformed ") + k + " in --join-of");
    }
  };
  const int p = num("p", 0);
  if (p < 2) throw UsageError("--join-of needs a prime p");
  return {make_spec(family, num("m", 1), kv.count("alphabet") ? kv["alphabet"] : "",
                    kv.count("delta") ? kv["delta"] : "1/2", num("q", 8)),
          static_cast<unsigned>(p), text};
}

// approx-z:<describe()> back to a grid spec.
TorusGridSpec parse_grid_ref(const std::string& ref) {
  const std::string prefix = "approx-z:";
  if (ref.rfind(prefix, 0) != 0) throw UsageError("target_ref '" + ref + "' is not an approx-z reference; pass --target");
  std::istringstream is(ref.substr(prefix.size()));
  std::string fam, ps, qs;
  is >> fam;
  if (fam == "full") {
    std::string torus;
    is >> torus;
    fam = "full torus";
  }
  is >> ps >> qs;
  if (ps.rfind("p=", 0) != 0 || qs.rfind("q=", 0) != 0) throw UsageError("malformed target_ref '" + ref + "'");
  TorusGridSpec s;
  s.p = static_cast<unsigned>(std::stoul(ps.substr(2)));
  s.q = std::stoi(qs.substr(2));
  if (fam == "Zcal") {
    s.family = ZcalGrid{};
  } else if (fam == "full torus") {
    s.family = FullTorus{};
  } else if (fam.rfind("X(S^", 0) == 0) {
    // X(S^N,1,delta)
    const auto inner = fam.substr(4, fam.size() - 5);
    const auto c1 = inner.find(','), c2 = inner.rfind(',');
    s.family = XsnGrid{std::stoi(inner.substr(0, c1)), parse_rational(inner.substr(c2 + 1))};
  } else {
    throw UsageError("unknown grid family in target_ref '" + ref + "'");
  }
  return s;
}

TorusGridSpec grid_spec(unsigned p, int q, const std::string& family, int N, const std::string& delta) {
  TorusGridSpec s;
  s.p = p;
  s.q = q;
  if (family == "Z") s.family = ZcalGrid{};
  else if (family == "XSN") s.family = XsnGrid{N, parse_rational(delta)};
  else if (family == "torus") s.family = FullTorus{};
  else throw UsageError("unknown --family '" + family + "' (expected Z, XSN or torus)");
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Number of shift orbits of P_p from the periodic counts of the divisors of p (Burnside).
BigInt orbit_count(const SubshiftSpec& spec, unsigned p) {
  BigInt sum = 0;
  for (unsigned d = 1; d <= p; ++d) {
    if (p % d != 0) continue;
    // Rotations by k with gcd(k, p) = p/d fix exactly the words of period dividing d.
    unsigned phi = 0;
    for (unsigned k = 1; k <= p / d; ++k) phi += std::gcd(k, p / d) == 1;
    sum += BigInt(phi) * count_periodic(spec, d);
  }
  return sum / p;
}

struct Output {
  Json doc;
  int code = 0;
};

class Runner {
 public:
  explicit Runner(CLI::App& app) {
    app.add_option("--seed", seed_, "seed for randomized trials")->capture_default_str();
    app.add_option("--output,-o", output_, "write to this path instead of stdout");
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
    app.allow_config_extras(false);
    app.require_subcommand(1);
    app.fallthrough();
    add_count(app);
    add_enumerate(app);
    add_orbits(app);
    add_verify(app);
    add_homology(app);
    add_index(app);
    add_approx(app);
    add_certify(app);
  }

  std::uint64_t seed() const { return seed_; }
  const std::string& output() const { return output_; }
  bool csv() const { return csv_; }
  const std::string& csv_text() const { return csv_text_; }
  Output& result() { return out_; }
  Json& inputs() { return inputs_; }
  std::string command;

 private:
  void add_family(CLI::App* sub, FamilyArgs& f, bool list_m) {
    sub->add_option("--family", f.family, "Sigma | XGm | Zcal | Ycal")->capture_default_str();
    sub->add_option("--m", f.m, list_m ? "m, or a comma list / range for sweeps" : "m")->capture_default_str();
    sub->add_option("--alphabet", f.alphabet, "alphabet for XGm, e.g. Z3, S:q=8, S^2:q=8");
    sub->add_option("--delta", f.delta, "threshold for XGm")->capture_default_str();
    sub->add_option("--q", f.q, "circle resolution for Zcal / Ycal")->capture_default_str();
  }

  Json family_inputs(const FamilyArgs& f) const {
    Json j{{"family", f.family}};
    if (family_uses_m(f.family)) j["m"] = f.m;
    if (f.family == "XGm") {
      j["alphabet"] = f.alphabet;
      j["delta"] = f.delta;
    }
    if (f.family == "Zcal" || f.family == "Ycal") j["q"] = f.q;
    return j;
  }

  void add_count(CLI::App& app) {
    auto* sub = app.add_subcommand("count", "number of p-periodic points (transfer-matrix trace)");
    add_family(sub, count_family_, true);
    sub->add_option("--p", count_p_, "period, or a comma list / range")->required();
    sub->add_flag("--csv", csv_, "CSV sweep output: family,m,p,count,orbits");
    sub->callback([this] {
      command = "count";
      const auto ms = family_uses_m(count_family_.family) ? parse_int_list(count_family_.m, "m") : std::vector<int>{0};
      const auto ps = parse_int_list(count_p_, "p");
      inputs_ = family_inputs(count_family_);
      inputs_["p"] = count_p_;
      Json rows = Json::array();
      std::ostringstream csv;
      csv << "family,m,p,count,orbits\n";
      for (int m : ms)
        for (int p : ps) {
          if (p < 1) throw UsageError("period must be >= 1");
          const auto spec = make_spec(count_family_.family, m, count_family_.alphabet, count_family_.delta,
                                      count_family_.q);
          const auto n = count_periodic(spec, static_cast<std::size_t>(p));
          const auto orbits = orbit_count(spec, static_cast<unsigned>(p));
          Json row{{"family", spec.describe()}, {"p", p}, {"count", n.str()}, {"orbits", orbits.str()}};
          if (family_uses_m(count_family_.family)) row["m"] = m;
          // Counts fit in 64 bits for any desk-scale input; keep them numeric when they do.
          if (n <= BigInt(std::numeric_limits<std::int64_t>::max())) {
            row["count"] = static_cast<std::int64_t>(n);
            row["orbits"] = static_cast<std::int64_t>(orbits);
          }
          rows.push_back(row);
          csv << count_family_.family << "," << (family_uses_m(count_family_.family) ? std::to_string(m) : "")
              << "," << p << "," << n << "," << orbits << "\n";
        }
      csv_text_ = csv.str();
      if (rows.size() == 1) {
        out_.doc["count"] = rows[0]["count"];
        out_.doc["orbits"] = rows[0]["orbits"];
      } else {
        out_.doc["rows"] = rows;
      }
      out_.doc["provenance"] = Json{
          {"count", "trace of the p-th power of the letter transfer matrix (after the k -> k*m! mod p recoding; "
                    "split into gcd(m!, p) cycles when not coprime)"},
          {"orbits", "Burnside count over the p shift powers from periodic counts of the divisors of p"}};
    });
  }

  void add_enumerate(CLI::App& app) {
    auto* sub = app.add_subcommand("enumerate", "list the p-periodic points as cyclic words");
    add_family(sub, enum_family_, false);
    sub->add_option("--p", enum_p_, "period")->required();
    sub->callback([this] {
      command = "enumerate";
      const auto spec = make_spec(enum_family_.family, std::stoi(enum_family_.m), enum_family_.alphabet,
                                  enum_family_.delta, enum_family_.q);
      inputs_ = family_inputs(enum_family_);
      inputs_["p"] = enum_p_;
      const auto words = enumerate_periodic(spec, enum_p_, enum_opts());
      out_.doc["subshift"] = spec.describe();
      out_.doc["count"] = words.size();
      out_.doc["words"] = words_to_json(spec.alphabet(), words);
      out_.doc["provenance"] = Json{{"words", "exhaustive cycle search over the letter constraint graph"},
                                    {"count", "size of the enumerated set"}};
    });
  }

  void add_orbits(CLI::App& app) {
    auto* sub = app.add_subcommand("orbits", "shift orbits of the p-periodic points");
    add_family(sub, orbit_family_, false);
    sub->add_option("--p", orbit_p_, "period")->required();
    sub->callback([this] {
      command = "orbits";
      const auto spec = make_spec(orbit_family_.family, std::stoi(orbit_family_.m), orbit_family_.alphabet,
                                  orbit_family_.delta, orbit_family_.q);
      inputs_ = family_inputs(orbit_family_);
      inputs_["p"] = orbit_p_;
      const auto words = enumerate_periodic(spec, orbit_p_, enum_opts());
      const auto dec = orbit_decompose(words, orbit_p_);
      Json orbits = Json::array();
      for (const auto& o : dec.orbits) {
        Json one = Json::array();
        for (auto i : o) one.push_back(format_word(spec.alphabet(), words[i]));
        orbits.push_back(one);
      }
      out_.doc["subshift"] = spec.describe();
      out_.doc["points"] = words.size();
      out_.doc["orbit_count"] = dec.orbits.size();
      out_.doc["free"] = dec.free;
      out_.doc["orbits"] = orbits;
      out_.doc["provenance"] = Json{{"orbits", "repeated shift of each unvisited word"},
                                    {"free", "every orbit has exactly p elements"}};
    });
  }

  void add_verify(CLI::App& app) {
    auto* sub = app.add_subcommand("verify-lemma", "run a property verifier");
    sub->add_option("--id", lemma_id_, "3.1 | 3.2 | 4.1 | 4.2 | embed-1.5")
        ->required()
        ->check(CLI::IsMember({"3.1", "3.2", "4.1", "4.2", "embed-1.5"}));
    sub->add_option("--m", lemma_m_, "m")->capture_default_str();
    sub->add_option("--alphabet", lemma_alphabet_, "alphabet for 3.1 / 3.2")->capture_default_str();
    sub->add_option("--delta", lemma_delta_, "threshold for 3.1 / 3.2")->capture_default_str();
    sub->add_option("--trials", lemma_trials_, "random trials for 3.1 / 3.2")->capture_default_str();
    sub->add_option("--p", lemma_p_, "prime for 4.1 / 4.2 / embed-1.5")->capture_default_str();
    sub->add_option("--q", lemma_q_, "circle resolution for embed-1.5")->capture_default_str();
    sub->add_option("--copies", lemma_copies_, "join copies K+1 for 4.2")->capture_default_str();
    sub->callback([this] {
      command = "verify-lemma";
      inputs_ = Json{{"id", lemma_id_}};
      LemmaResult r;
      if (lemma_id_ == "3.1" || lemma_id_ == "3.2") {
        if (lemma_m_ < 2) throw UsageError("--m must be >= 2 for the eta lemmas");
        const auto a = Alphabet::parse(lemma_alphabet_);
        const auto delta = parse_rational(lemma_delta_);
        inputs_.update(Json{{"m", lemma_m_}, {"alphabet", a.to_string()}, {"delta", to_string(delta)},
                            {"trials", lemma_trials_}});
        r = lemma_id_ == "3.2" ? verify_theta_eta_identity(a, lemma_m_, lemma_trials_, seed_, delta)
                               : verify_eta_containment(a, lemma_m_, lemma_trials_, seed_, delta);
      } else if (lemma_id_ == "4.1") {
        inputs_.update(Json{{"m", lemma_m_}, {"p", lemma_p_}});
        r = verify_sigma_periodic(lemma_m_, lemma_p_);
      } else if (lemma_id_ == "4.2") {
        if (lemma_copies_ < 1) throw UsageError("--copies must be >= 1");
        inputs_.update(Json{{"m", lemma_m_}, {"p", lemma_p_}, {"copies", lemma_copies_}});
        r = verify_join_of_periodic(lemma_m_, lemma_p_, lemma_copies_ - 1);
      } else {
        inputs_.update(Json{{"p", lemma_p_}, {"q", lemma_q_}});
        r = verify_pair_embedding(lemma_p_, lemma_q_, enum_opts());
      }
      out_.doc["lemma"] = r.lemma;
      out_.doc["trials"] = r.trials;
      out_.doc["failures"] = r.failures;
      if (r.first_counterexample) out_.doc["first_counterexample"] = *r.first_counterexample;
      out_.doc["passed"] = r.passed();
      out_.doc["details"] = r.details;
      out_.doc["provenance"] = Json{{"failures", "direct evaluation of the identity on every trial input"}};
      out_.code = r.passed() ? 0 : 2;
    });
  }

  // Builds the complex named by --complex or --join-of/--copies.
  SimplicialComplex load_complex(const std::string& file, const std::string& join_of, int copies, Json& in,
                                 std::optional<std::vector<SimplicialComplex>>* factors = nullptr) {
    if (!file.empty() == !join_of.empty()) throw UsageError("give exactly one of --complex or --join-of");
    if (!file.empty()) {
      in["complex"] = file;
      return complex_from_json(read_json_file(file));
    }
    if (copies < 1) throw UsageError("--copies must be >= 1");
    const auto f = parse_join_of(join_of);
    in["join_of"] = join_of;
    in["copies"] = copies;
    const auto factor = periodic_point_set(f.spec, f.p, enum_opts());
    std::vector<SimplicialComplex> fs(static_cast<std::size_t>(copies), factor);
    if (factors) *factors = fs;
    return join_complexes(fs);
  }

  void add_homology(CLI::App& app) {
    auto* sub = app.add_subcommand("homology", "reduced Betti numbers over F_l");
    sub->add_option("--complex", hom_complex_, "complex JSON file");
    sub->add_option("--join-of", hom_join_, "factor, e.g. Sigma:m=1,p=5");
    sub->add_option("--copies", hom_copies_, "number of join copies")->capture_default_str();
    sub->add_option("--field", hom_field_, "prime l (default: the acting prime)");
    sub->callback([this] {
      command = "homology";
      inputs_ = Json::object();
      const auto c = load_complex(hom_complex_, hom_join_, hom_copies_, inputs_);
      const auto l = hom_field_ ? hom_field_ : c.prime();
      inputs_["field"] = l;
      const auto b = betti_of(c, l);
      out_.doc.update(betti_to_json(b));
      const auto fr = c.freeness();
      out_.doc["free"] = fr.free;
      if (!fr.free) out_.doc["free_witness"] = fr.witness;
      out_.doc["provenance"] = Json{
          {"reduced_betti", "exact sparse elimination of the augmented boundary matrices over F_" + std::to_string(l)},
          {"connectivity", "largest k with reduced Betti numbers zero through degree k"},
          {"free", "no cell is mapped to itself by the generator"}};
    });
  }

  void add_index(CLI::App& app) {
    auto* sub = app.add_subcommand("index", "index / coindex report");
    sub->add_option("--complex", idx_complex_, "complex JSON file");
    sub->add_option("--join-of", idx_join_, "factor, e.g. Sigma:m=2,p=7");
    sub->add_option("--copies", idx_copies_, "number of join copies")->capture_default_str();
    sub->callback([this] {
      command = "index";
      inputs_ = Json::object();
      std::optional<std::vector<SimplicialComplex>> factors;
      const auto c = load_complex(idx_complex_, idx_join_, idx_copies_, inputs_, &factors);
      IndexReport r(c.prime(), idx_join_.empty() ? idx_complex_ : "(" + idx_join_ + ")^{*" + std::to_string(idx_copies_) + "}");
      if (factors) {
        r = index_of_join_of_finite(*factors, r.subject());
      } else if (c.dimension() <= 0) {
        r = exact_index_finite_free(c, r.subject());
      } else {
        const auto en = is_EnZp(c, c.dimension());
        if (en.certified) r.set_exact(c.dimension(), "E_n recognition: " + en.evidence);
        else apply_dimension_bound(c, r);
      }
      out_.doc.update(report_to_json(r));
    });
  }

  void add_approx(CLI::App& app) {
    auto* sub = app.add_subcommand("approx-z", "cubical approximation on the torus grid");
    sub->add_option("--p", ax_p_, "prime")->required();
    sub->add_option("--q", ax_q_, "grid resolution (4 | q, q >= 8)")->required();
    sub->add_option("--family", ax_family_, "Z | XSN | torus")->capture_default_str();
    sub->add_option("--N", ax_N_, "sphere dimension for XSN")->capture_default_str();
    sub->add_option("--delta", ax_delta_, "threshold for XSN")->capture_default_str();
    sub->add_option("--field", ax_field_, "prime l (default: p)");
    sub->add_flag("--stability", ax_stability_, "also compute at 2q and compare");
    sub->callback([this] {
      command = "approx-z";
      const auto spec = grid_spec(ax_p_, ax_q_, ax_family_, ax_N_, ax_delta_);
      const auto l = ax_field_ ? ax_field_ : ax_p_;
      inputs_ = Json{{"p", ax_p_}, {"q", ax_q_}, {"family", ax_family_}};
      if (ax_family_ == "XSN") inputs_.update(Json{{"N", ax_N_}, {"delta", ax_delta_}});
      inputs_["field"] = l;
      inputs_["stability"] = ax_stability_;
      const auto cap = resource_cap(default_cell_cap());
      const auto c = build_approx(spec, cap);
      const auto b = betti_of(c, l);
      const auto fr = c.freeness();
      out_.doc["label"] = "approximation at resolution q=" + std::to_string(ax_q_) + " of " + spec.describe();
      out_.doc["vertices"] = c.cell_count(0);
      out_.doc["cells_by_dim"] = b.cells;
      out_.doc["reduced_betti"] = b.reduced;
      out_.doc["connectivity"] = connectivity(b);
      out_.doc["free"] = fr.free;
      if (!fr.free) out_.doc["free_witness"] = fr.witness;
      if (ax_stability_) {
        const auto fine = betti_profile(spec.refined(), l, cap);
        out_.doc["stability"] = Json{{"q", ax_q_}, {"q_fine", 2 * ax_q_}, {"reduced_betti_fine", fine.reduced},
                                     {"agree", fine.reduced == b.reduced}};
      }
      out_.doc["provenance"] = Json{
          {"vertices", "grid points whose cyclic word satisfies the family predicate"},
          {"reduced_betti", "exact sparse elimination over F_" + std::to_string(l) + " of the cubical chain complex"},
          {"free", "no cube is mapped to itself by the coordinate shift"}};
      if (ax_stability_) out_.doc["provenance"]["stability"] = "same computation at resolution 2q";
    });
  }

  void add_certify(CLI::App& app) {
    auto* sub = app.add_subcommand("certify", "check an equivariant map certificate");
    sub->add_option("--certificate", cert_file_, "certificate JSON file");
    sub->add_flag("--canonical-p2", cert_canonical_, "use the built-in E_1 certificate for the p = 2 Zcal grid");
    sub->add_option("--q", cert_q_, "resolution for --canonical-p2")->capture_default_str();
    sub->add_option("--target", cert_target_, "target complex JSON (default: resolve target_ref)");
    sub->callback([this] {
      command = "certify";
      if (cert_file_.empty() == !cert_canonical_) throw UsageError("give exactly one of --certificate or --canonical-p2");
      const auto cert = cert_canonical_ ? canonical_certificate_P2(cert_q_) : certificate_from_json(read_json_file(cert_file_));
      inputs_ = cert_canonical_ ? Json{{"canonical_p2", true}, {"q", cert_q_}} : Json{{"certificate", cert_file_}};
      if (!cert_target_.empty()) inputs_["target"] = cert_target_;
      std::optional<EquivariantComplex> target;
      if (!cert_target_.empty()) target = complex_from_json(read_json_file(cert_target_));
      else target = build_approx(parse_grid_ref(cert.target_ref), resource_cap(default_cell_cap()));
      IndexReport r(cert.p, cert.target_ref.empty() ? cert_target_ : cert.target_ref);
      const auto v = verify_certificate(cert, *target, r);
      out_.doc["certificate"] = certificate_to_json(cert);
      out_.doc["accepted"] = v.accepted;
      if (!v.accepted) out_.doc["witness"] = v.witness;
      out_.doc["checks"] = v.checks;
      out_.doc["report"] = report_to_json(r);
      out_.code = v.accepted ? 0 : 2;
    });
  }

  std::uint64_t seed_ = 1;
  std::string output_;
  Output out_;
  Json inputs_ = Json::object();
  bool csv_ = false;
  std::string csv_text_;

  FamilyArgs count_family_, enum_family_, orbit_family_;
  std::string count_p_;
  unsigned enum_p_ = 0, orbit_p_ = 0;

  std::string lemma_id_, lemma_alphabet_ = "Z3", lemma_delta_ = "1/2";
  int lemma_m_ = 2, lemma_copies_ = 2, lemma_q_ = 8;
  unsigned lemma_p_ = 5;
  std::uint64_t lemma_trials_ = 1000;

  std::string hom_complex_, hom_join_;
  int hom_copies_ = 1;
  std::uint32_t hom_field_ = 0;

  std::string idx_complex_, idx_join_;
  int idx_copies_ = 1;

  unsigned ax_p_ = 2;
  int ax_q_ = 8, ax_N_ = 1;
  std::string ax_family_ = "Z", ax_delta_ = "1/2";
  std::uint32_t ax_field_ = 0;
  bool ax_stability_ = false;

  std::string cert_file_, cert_target_;
  bool cert_canonical_ = false;
  int cert_q_ = 8;
};

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write '" << path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

Json error_doc(const std::string& command, const std::string& reason, const std::string& message) {
  return Json{{"command", command}, {"error", Json{{"reason", reason}, {"message", message}}}, {"versions", versions()},
              {"timestamp", timestamp()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Z_p index and coindex toolkit for shift spaces"};
  app.name("coindex");
  Runner runner(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_doc(runner.command, "usage", e.what()).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cout << error_doc(runner.command, e.reason(), e.what()).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << error_doc(runner.command, "internal", e.what()).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return 1;
  }

  if (runner.csv()) return emit(runner.csv_text(), runner.output());

  Json doc{{"command", runner.command}, {"inputs", runner.inputs()}, {"seed", runner.seed()}};
  doc.update(runner.result().doc);
  doc["versions"] = versions();
  doc["timestamp"] = timestamp();
  if (emit(doc.dump(2) + "\n", runner.output()) != 0) return 1;
  return runner.result().code;
}
