#include "lieform/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lieform/classifier.hpp"
#include "lieform/cohomology.hpp"
#include "lieform/lattice.hpp"
#include "lieform/sl2_modules.hpp"

namespace lieform {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::int64_t> kDefaultPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23};

struct Outcome {
  ojson results;
  std::string status = "OK";
  int exit_code = kExitOk;
};

void emit(std::ostream& out, const std::string& command, const ojson& inputs, const Outcome& o) {
  ojson env;
  env["command"] = command;
  env["inputs"] = inputs;
  env["results"] = o.results;
  env["status"] = o.status;
  env["tool_version"] = kToolVersion;
  out << env.dump(2) << "\n";
}

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

ojson vector_json(const Vec& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

// ---- input parsing --------------------------------------------------------

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  fail(ErrorCode::Schema, "at " + (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

mpq_class parse_rational(const ojson& j, const std::string& ptr) {
  if (j.is_number_integer()) return mpq_class(std::to_string(j.get<long long>()));
  if (!j.is_string()) schema_error(ptr, "expected an integer or an \"a/b\" string");
  const std::string s = j.get<std::string>();
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) schema_error(ptr, "cannot parse rational \"" + s + "\"");
  q.canonicalize();
  return q;
}

std::int64_t parse_int(const ojson& j, const std::string& ptr) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  schema_error(ptr, "expected an integer");
}

Matrix parse_matrix(const ojson& j, const std::string& ptr, const RingSpec& ring, std::size_t rows, std::optional<std::size_t> cols) {
  if (!j.is_array()) schema_error(ptr, "expected an array of rows");
  if (j.size() != rows) schema_error(ptr, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  std::size_t width = cols ? *cols : (rows ? j[0].size() : 0);
  Matrix m(ring, rows, width);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = ptr + "/" + std::to_string(i);
    if (!j[i].is_array()) schema_error(rp, "expected a row array");
    if (j[i].size() != width) schema_error(rp, "expected " + std::to_string(width) + " entries, got " + std::to_string(j[i].size()));
    for (std::size_t c = 0; c < width; ++c) {
      const std::string ep = rp + "/" + std::to_string(c);
      try {
        m.set(i, c, Scalar::from_rational(ring, parse_rational(j[i][c], ep)));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Schema) throw;
        schema_error(ep, e.what());
      }
    }
  }
  return m;
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Schema, "cannot open " + path);
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Schema, "at /: invalid JSON in " + path + ": " + e.what());
  }
}

WeightedModule parse_module(const ojson& j) {
  if (!j.is_object()) schema_error("", "expected an object");
  for (const char* key : {"p", "lattice", "weights", "pieces"})
    if (!j.contains(key)) schema_error("/" + std::string(key), "missing required field");
  const std::int64_t p = parse_int(j["p"], "/p");
  if (!is_prime(p)) schema_error("/p", "p must be prime");
  const ojson& lat = j["lattice"];
  if (!lat.is_array() || lat.empty()) schema_error("/lattice", "expected a nonempty array of rows");
  const std::size_t n = lat.size();
  const RingSpec q = RingSpec::rationals();
  WeightedModule m{p, parse_matrix(lat, "/lattice", q, n, n), {}, {}, std::nullopt, {}};
  if (!j["weights"].is_array()) schema_error("/weights", "expected an array of integers");
  for (std::size_t k = 0; k < j["weights"].size(); ++k)
    m.weights.push_back(parse_int(j["weights"][k], "/weights/" + std::to_string(k)));
  const ojson& pieces = j["pieces"];
  if (!pieces.is_object()) schema_error("/pieces", "expected an object keyed by weight");
  for (std::int64_t w : m.weights) {
    const std::string key = std::to_string(w);
    if (!pieces.contains(key)) schema_error("/pieces/" + key, "missing piece for weight " + key);
    const ojson& pc = pieces[key];
    m.pieces.push_back(parse_matrix(pc, "/pieces/" + key, q, n, std::nullopt));
  }
  for (const auto& [key, _] : pieces.items())
    if (std::find_if(m.weights.begin(), m.weights.end(), [&](std::int64_t w) { return std::to_string(w) == key; }) ==
        m.weights.end())
      schema_error("/pieces/" + key, "piece for a weight not listed in /weights");
  std::size_t total = 0;
  for (const auto& pc : m.pieces) total += pc.cols();
  if (total != n) schema_error("/pieces", "piece ranks sum to " + std::to_string(total) + ", expected " + std::to_string(n));
  if (j.contains("action")) {
    const ojson& a = j["action"];
    if (!a.is_object()) schema_error("/action", "expected an object with h, x, y");
    const RingSpec zp = RingSpec::localized_at(p);
    std::vector<Matrix> mats;
    for (const char* key : {"h", "x", "y"}) {
      if (!a.contains(key)) schema_error("/action/" + std::string(key), "missing action matrix");
      mats.push_back(parse_matrix(a[key], "/action/" + std::string(key), zp, n, n));
    }
    m.action = Sl2Action{mats[0], mats[1], mats[2]};
  }
  if (j.contains("labels")) {
    if (!j["labels"].is_array() || j["labels"].size() != n) schema_error("/labels", "expected one label per ambient coordinate");
    for (std::size_t k = 0; k < n; ++k) {
      if (!j["labels"][k].is_string()) schema_error("/labels/" + std::to_string(k), "expected a string");
      m.labels.push_back(j["labels"][k].get<std::string>());
    }
  }
  try {
    m.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Schema, std::string("at /: ") + e.what());
  }
  return m;
}

DynkinType resolve_type(const std::string& type, int rank) {
  if (type.empty()) fail(ErrorCode::InvalidRank, "--type is required");
  if (type.size() > 1) {
    const DynkinType t = DynkinType::parse(type);
    if (rank != 0 && rank != t.rank) fail(ErrorCode::InvalidRank, "--rank disagrees with --type " + type);
    return t;
  }
  if (rank == 0) fail(ErrorCode::InvalidRank, "--rank is required with a bare series letter");
  return DynkinType::make(parse_series(type[0]), rank);
}

std::int64_t require_prime(std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, std::to_string(p) + " is not prime");
  return p;
}

std::vector<std::int64_t> parse_primes(const std::string& list) {
  std::vector<std::int64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) fail(ErrorCode::InvalidRing, "cannot parse prime '" + item + "'");
    out.push_back(require_prime(v));
  }
  if (out.empty()) fail(ErrorCode::InvalidRing, "--primes is empty");
  return out;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LIEFORM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

ojson verdict_json(const PerfectnessVerdict& v) {
  ojson j;
  j["type"] = v.dynkin.name();
  j["series"] = std::string(1, series_letter(v.dynkin.series));
  j["rank"] = v.dynkin.rank;
  j["p"] = v.p;
  j["predicted"] = v.predicted;
  j["reason"] = reason_name(v.reason);
  if (v.oracle) j["oracle"] = *v.oracle;
  if (v.agree) j["agree"] = *v.agree;
  return j;
}

// ---- commands -------------------------------------------------------------

Outcome cmd_classify(const DynkinType& t, std::int64_t p, bool oracle) {
  const PerfectnessVerdict v = oracle ? verdict_with_oracle(t, require_prime(p)) : predict_perfect(t, require_prime(p));
  Outcome o;
  o.results = verdict_json(v);
  if (v.agree && !*v.agree) {
    o.status = "MISMATCH";
    o.exit_code = kExitMismatch;
  }
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct TableRun {
  std::vector<PerfectnessVerdict> rows;
  bool all_agree = true;
};

TableRun run_table(int max_rank, const std::vector<std::int64_t>& primes, bool oracle, bool aliases) {
  if (max_rank < 1 || max_rank > 8) fail(ErrorCode::InvalidRank, "--max-rank must lie in [1, 8]");
  std::vector<std::pair<DynkinType, std::int64_t>> cells;
  for (const auto& t : all_types(max_rank, aliases))
    for (std::int64_t p : primes) cells.emplace_back(t, p);
  TableRun run;
  run.rows.resize(cells.size(), PerfectnessVerdict{{Series::A, 1}, 2, false, Reason::P_EQ_2, std::nullopt, std::nullopt});
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        run.rows[k] = oracle ? verdict_with_oracle(cells[k].first, cells[k].second)
                             : predict_perfect(cells[k].first, cells[k].second);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = worker_count(cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (const auto& r : run.rows)
    if (r.agree && !*r.agree) run.all_agree = false;
  return run;
}

std::string table_text(const TableRun& run, bool oracle, const std::string& format) {
  std::vector<std::string> header = {"series", "rank", "p", "predicted", "reason"};
  if (oracle) {
    header.push_back("oracle");
    header.push_back("agree");
  }
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  std::vector<std::vector<std::string>> body;
  for (const auto& r : run.rows) {
    std::vector<std::string> row = {std::string(1, series_letter(r.dynkin.series)), std::to_string(r.dynkin.rank),
                                    std::to_string(r.p), b(r.predicted), reason_name(r.reason)};
    if (oracle) {
      row.push_back(b(*r.oracle));
      row.push_back(b(*r.agree));
    }
    body.push_back(row);
  }
  std::string s;
  if (format == "csv") {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + csv_field(cells[i]);
      s += "\r\n";
    };
    line(header);
    for (const auto& row : body) line(row);
  } else {
    auto line = [&](const std::vector<std::string>& cells) {
      s += "|";
      for (const auto& c : cells) s += " " + c + " |";
      s += "\n";
    };
    line(header);
    s += "|";
    for (std::size_t i = 0; i < header.size(); ++i) s += "---|";
    s += "\n";
    for (const auto& row : body) line(row);
  }
  return s;
}

struct Assertions {
  ojson list = ojson::array();
  bool all = true;
  void add(const std::string& name, bool pass, ojson detail = nullptr) {
    ojson a;
    a["name"] = name;
    a["pass"] = pass;
    if (!detail.is_null()) a["detail"] = detail;
    list.push_back(a);
    all = all && pass;
  }
};

Outcome verify_casimir(const DynkinType& t, std::int64_t p) {
  const RingSpec fp = RingSpec::prime_field(require_prime(p));
  const ChevalleyPresentation pres(t);
  const LieAlgebra g = LieAlgebra::from_presentation(pres, fp);
  const CasimirTensor c = casimir(g);  // NotPerfect surfaces as ERROR
  const Matrix op = casimir_operator(g, c);
  const Matrix id = Matrix::identity(fp, g.dim());
  Assertions a;
  a.add("casimir_operator_is_identity", op == id);
  bool commutes = true;
  for (std::size_t i = 0; i < g.dim() && commutes; ++i) {
    const Matrix ad = ad_basis(g, i);
    commutes = op * ad == ad * op;
  }
  a.add("operator_commutes_with_ad", commutes);
  const Matrix gram = killing_form(g).gram;
  a.add("dual_basis_property", gram * c.coefficients == id);
  bool flips = true;
  ojson failed = ojson::array();
  for (const auto& alpha : pres.roots().positive_roots()) {
    const Matrix s = triple_flip(pres, fp, alpha);
    if (!is_automorphism(g, s) || apply_endo_to_casimir(c, s) != c.coefficients) {
      flips = false;
      failed.push_back(pres.basis_labels()[pres.root_index(alpha)]);
    }
  }
  a.add("invariant_under_triple_flips", flips, failed.empty() ? ojson(nullptr) : failed);
  std::vector<Scalar> params;
  for (std::size_t i = 0; i < pres.rank(); ++i) params.emplace_back(fp, static_cast<long long>(2 + i % static_cast<std::size_t>(p - 2 > 0 ? p - 2 : 1)));
  const Matrix torus = torus_automorphism(pres, fp, params);
  a.add("invariant_under_torus", is_automorphism(g, torus) && apply_endo_to_casimir(c, torus) == c.coefficients);
  Outcome o;
  o.results["dim"] = g.dim();
  o.results["assertions"] = a.list;
  o.results["passed"] = a.all;
  if (!a.all) {
    o.status = "ERROR";
    o.exit_code = kExitError;
  }
  return o;
}

Outcome verify_derivations(const DynkinType& t, std::int64_t p) {
  const RingSpec fp = RingSpec::prime_field(require_prime(p));
  const LieAlgebra g = LieAlgebra::chevalley(t, fp);
  const Matrix der = derivation_algebra(g);
  const std::size_t zdim = center(g).cols();
  Matrix ads(fp, g.dim() * g.dim(), 0);
  for (std::size_t i = 0; i < g.dim(); ++i) ads = ads.hstack(to_column(fp, flatten(ad_basis(g, i))));
  const std::size_t ad_rank = rank(ads);
  Assertions a;
  a.add("dim_der_equals_dim_g_minus_center", der.cols() == g.dim() - zdim,
        ojson{{"dim_der", der.cols()}, {"dim_g", g.dim()}, {"dim_center", zdim}});
  a.add("der_equals_ad", rank(ads.hstack(der)) == ad_rank && ad_rank == der.cols());
  Outcome o;
  o.results["dim_g"] = g.dim();
  o.results["dim_der"] = der.cols();
  o.results["perfect_killing"] = is_perfect(killing_form(g));
  o.results["assertions"] = a.list;
  o.results["passed"] = a.all;
  if (!a.all) {
    o.status = "ERROR";
    o.exit_code = kExitError;
  }
  return o;
}

ojson cohomology_json(const CochainComplex& c) {
  ojson j;
  j["cochain_dims"] = {c.dim(0), c.dim(1), c.dim(2), c.dim(3)};
  j["H"] = {cohomology_dim(c, 0), cohomology_dim(c, 1), cohomology_dim(c, 2)};
  j["d_squared_zero"] = (c.d1 * c.d0).is_zero() && (c.d2 * c.d1).is_zero();
  return j;
}

Outcome verify_cohomology(const DynkinType& t, std::int64_t p) {
  const RingSpec fp = RingSpec::prime_field(require_prime(p));
  const LieAlgebra g = LieAlgebra::chevalley(t, fp);
  const CochainComplex c = ce_complex(g);
  const ojson info = cohomology_json(c);
  Assertions a;
  a.add("d_squared_zero", info["d_squared_zero"].get<bool>());
  const bool perfect = is_perfect(killing_form(g));
  for (int d = 0; d <= 2; ++d) {
    const std::size_t h = info["H"][static_cast<std::size_t>(d)].get<std::size_t>();
    if (perfect) a.add("H" + std::to_string(d) + "_vanishes", h == 0, ojson{{"dim", h}});
  }
  Outcome o;
  o.results = info;
  o.results["perfect_killing"] = perfect;
  o.results["assertions"] = a.list;
  o.results["passed"] = a.all;
  if (!a.all) {
    o.status = "ERROR";
    o.exit_code = kExitError;
  }
  return o;
}

std::int64_t expected_ratio(const DynkinType& t) {
  const std::int64_t n = t.rank;
  switch (t.series) {
    case Series::A: return 2 * (n + 1);
    case Series::B: return 2 * n - 1;
    case Series::C: return 2 * n + 2;
    case Series::D: return 2 * n - 2;
    default: fail(ErrorCode::NotClassical, "ratio checks cover classical types only");
  }
}

Outcome verify_ratios(const DynkinType& t) {
  const std::int64_t expect = expected_ratio(t);
  const std::int64_t c = ratio_check(t);
  Assertions a;
  a.add("killing_equals_c_times_trace", c == expect, ojson{{"c", c}, {"expected", expect}});
  Outcome o;
  o.results["c"] = c;
  o.results["expected"] = expect;
  o.results["assertions"] = a.list;
  o.results["passed"] = a.all;
  if (!a.all) {
    o.status = "ERROR";
    o.exit_code = kExitError;
  }
  return o;
}

Outcome verify_kernel_b(int n, std::int64_t p) {
  if (p != 2) fail(ErrorCode::OutOfRange, "the B-series kernel witness lives in characteristic 2");
  const KernelWitness w = b_series_kernel_witness(n);
  Assertions a;
  a.add("span_is_ideal", w.is_ideal);
  a.add("ideal_is_nilpotent", w.is_nilpotent);
  a.add("inside_killing_kernel", w.in_killing_kernel);
  Outcome o;
  o.results["n"] = n;
  o.results["basis"] = w.labels;
  ojson vs = ojson::array();
  for (std::size_t k = 0; k < w.vectors.size(); ++k) vs.push_back({{"name", w.vector_labels[k]}, {"coordinates", vector_json(w.vectors[k])}});
  o.results["kernel_vectors"] = vs;
  o.results["killing_kernel_dim"] = form_kernel(killing_form(w.algebra)).cols();
  o.results["assertions"] = a.list;
  o.results["passed"] = a.all;
  if (!a.all) {
    o.status = "ERROR";
    o.exit_code = kExitError;
  }
  return o;
}

Outcome cmd_sl2(const WeightedModule& m, bool strict) {
  const DecompositionResult r = extend_torus(m, ExtendOptions{strict});
  Outcome o;
  o.results["success"] = r.success;
  o.results["path"] = r.path;
  o.results["p_type"] = {{"type1", r.type1}, {"type2", r.type2}, {"type3", r.type3}};
  o.results["weights"] = r.weights;
  ojson pieces = ojson::object(), proj = ojson::object();
  for (std::size_t k = 0; k < r.weights.size(); ++k) {
    pieces[std::to_string(r.weights[k])] = matrix_json(r.pieces[k]);
    if (k < r.projectors.size()) proj[std::to_string(r.weights[k])] = matrix_json(r.projectors[k]);
  }
  o.results["pieces"] = pieces;
  if (r.success) o.results["projectors"] = proj;
  if (r.failure_witness) {
    ojson w;
    w["text"] = r.failure_witness->text;
    w["vector"] = matrix_json(r.failure_witness->vector.transpose())[0];
    if (r.failure_witness->weight_pair)
      w["weight_pair"] = {r.failure_witness->weight_pair->first, r.failure_witness->weight_pair->second};
    else
      w["weight_pair"] = nullptr;
    o.results["failure_witness"] = w;
    ojson qv = ojson::array();
    for (const auto& [i, j] : r.q_violations) qv.push_back({i, j});
    o.results["q_violations"] = qv;
  }
  if (!r.success) o.exit_code = kExitDecompositionFailed;
  return o;
}

Outcome cmd_lift(const DynkinType& t, std::int64_t p, const std::string& sigma_file, const std::string& ext_name) {
  const RingSpec fp = RingSpec::prime_field(require_prime(p));
  const LieAlgebra gz = LieAlgebra::chevalley(t, RingSpec::integers());
  Matrix sigma_bar = Matrix::identity(fp, gz.dim());
  if (!sigma_file.empty()) {
    ojson j = read_json_file(sigma_file);
    std::string ptr;
    if (j.is_object()) {
      if (!j.contains("sigma")) schema_error("/sigma", "missing matrix");
      j = ojson(j["sigma"]);
      ptr = "/sigma";
    }
    sigma_bar = parse_matrix(j, ptr, fp, gz.dim(), gz.dim());
  }
  SquareZeroExtension ext = ext_name == "dual" ? SquareZeroExtension::dual_numbers(p) : SquareZeroExtension::mod_p_squared(p);
  const LiftReport rep = lift_automorphism(gz, ext, sigma_bar);
  Outcome o;
  o.results["total_ring"] = ext.total_ring().to_string();
  o.results["sigma_bar"] = matrix_json(sigma_bar);
  if (ext.total_ring().kind() == RingKind::IntegersModPk) {
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < rep.sigma.rows(); ++i) {
      ojson row = ojson::array();
      for (std::size_t j = 0; j < rep.sigma.cols(); ++j) row.push_back(rep.sigma(i, j).residue());
      rows.push_back(row);
    }
    o.results["sigma"] = rows;
  } else {
    o.results["sigma"] = matrix_json(rep.sigma);
  }
  o.results["theta_is_zero"] = rep.theta.is_zero();
  Assertions a;
  a.add("theta_is_cocycle", rep.theta_is_cocycle);
  a.add("reduces_to_sigma_bar", rep.reduces_to_sigma_bar);
  a.add("preserves_bracket", rep.preserves_bracket);
  o.results["assertions"] = a.list;
  o.results["passed"] = a.all;
  if (!a.all) {
    o.status = "ERROR";
    o.exit_code = kExitError;
  }
  return o;
}

Outcome cmd_presentation(const DynkinType& t) {
  const ChevalleyPresentation pres(t);
  Outcome o;
  o.results["type"] = t.name();
  o.results["dim"] = pres.dim();
  o.results["cartan"] = pres.roots().cartan();
  o.results["basis"] = pres.basis_labels();
  ojson brackets = ojson::array();
  for (std::size_t i = 0; i < pres.dim(); ++i)
    for (std::size_t j = i + 1; j < pres.dim(); ++j) {
      if (pres.bracket(i, j).empty()) continue;
      ojson terms = ojson::array();
      for (const auto& term : pres.bracket(i, j)) terms.push_back({term.index, term.coeff});
      brackets.push_back({{"i", i}, {"j", j}, {"terms", terms}});
    }
  o.results["brackets"] = brackets;
  o.results["jacobi"] = check_jacobi(pres);
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Lie-theory computations over explicit coefficient rings", "lieform"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string type;
  int rank = 0;
  std::int64_t prime = 0;
  bool oracle = false;

  auto* classify = app.add_subcommand("classify", "Predict (and optionally brute-force) Killing-form perfectness");
  classify->add_option("--type", type, "Dynkin type, e.g. E8, or a series letter with --rank")->required();
  classify->add_option("--rank", rank, "Rank when --type is a bare letter");
  classify->add_option("--prime", prime, "Characteristic")->required();
  classify->add_flag("--oracle", oracle, "Also compute the Killing Gram rank mod p");

  int max_rank = 8;
  std::string primes_text;
  std::string format = "json";
  std::string output;
  bool aliases = false;
  auto* table = app.add_subcommand("table", "Perfectness table over types and primes");
  table->add_option("--max-rank", max_rank, "Largest rank (<= 8)");
  table->add_option("--primes", primes_text, "Comma-separated primes (default 2,3,...,23)");
  table->add_flag("--oracle", oracle, "Add brute-force oracle and agree columns");
  table->add_option("--format", format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
  table->add_option("--output", output, "Write the csv/md table here and print the envelope");
  table->add_flag("--with-rank1-aliases", aliases, "Include B1 and C1 rows");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run one verification suite");
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"casimir", "derivations", "cohomology", "ratios", "kernel-b2"}));
  verify->add_option("--type", type, "Dynkin type");
  verify->add_option("--rank", rank, "Rank");
  verify->add_option("--prime", prime, "Characteristic");

  std::string file, builtin;
  bool strict = false;
  auto* sl2 = app.add_subcommand("sl2-decompose", "Torus extension for an sl2 weight module");
  auto* file_opt = sl2->add_option("--file", file, "Module JSON");
  auto* builtin_opt = sl2->add_option("--builtin", builtin, "chain:j or counterexample");
  file_opt->excludes(builtin_opt);
  sl2->add_option("--prime", prime, "Prime for builtin modules");
  sl2->add_flag("--strict", strict, "Reject weight sets outside p-types 1 and 2");

  std::string sigma_file, ext_name = "zp2";
  auto* lift = app.add_subcommand("lift-aut", "Lift an automorphism over F_p to Z/p^2 or F_p[eps]");
  lift->add_option("--type", type, "Dynkin type (default A1)");
  lift->add_option("--rank", rank, "Rank");
  lift->add_option("--prime", prime, "Characteristic")->required();
  lift->add_option("--sigma", sigma_file, "JSON matrix of sigma_bar (default identity)");
  lift->add_option("--ext", ext_name, "zp2 or dual")->check(CLI::IsMember({"zp2", "dual"}));

  auto* coh = app.add_subcommand("cohomology", "Chevalley-Eilenberg cohomology dimensions H^0..H^2");
  coh->add_option("--type", type, "Dynkin type")->required();
  coh->add_option("--rank", rank, "Rank");
  coh->add_option("--prime", prime, "Characteristic")->required();

  auto* pres = app.add_subcommand("presentation", "Dump the Chevalley structure constants");
  pres->add_option("--type", type, "Dynkin type")->required();
  pres->add_option("--rank", rank, "Rank");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "lieform: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  ojson inputs = ojson::object();
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    const std::string key = opt->get_name().substr(2);
    if (opt->get_expected_min() == 0) inputs[key] = true;
    else {
      const std::string v = opt->as<std::string>();
      const bool numeric = !v.empty() && v.find_first_not_of("-0123456789") == std::string::npos && v != "-";
      inputs[key] = numeric ? ojson(std::stoll(v)) : ojson(v);
    }
  }

  try {
    Outcome o;
    if (name == "classify") {
      o = cmd_classify(resolve_type(type, rank), prime, oracle);
    } else if (name == "table") {
      const auto primes = primes_text.empty() ? kDefaultPrimes : parse_primes(primes_text);
      const TableRun run = run_table(max_rank, primes, oracle, aliases);
      if (!run.all_agree) {
        o.status = "MISMATCH";
        o.exit_code = kExitMismatch;
      }
      if (format != "json" && output.empty()) {
        out << table_text(run, oracle, format);
        err << "lieform table: " << run.rows.size() << " rows, status " << o.status << "\n";
        return o.exit_code;
      }
      if (format != "json") {
        std::ofstream f(output, std::ios::binary);
        if (!f) fail(ErrorCode::OutOfRange, "cannot write " + output);
        f << table_text(run, oracle, format);
        o.results["artifact"] = output;
      }
      o.results["columns"] = oracle ? ojson{"series", "rank", "p", "predicted", "reason", "oracle", "agree"}
                                    : ojson{"series", "rank", "p", "predicted", "reason"};
      o.results["row_count"] = run.rows.size();
      ojson rows = ojson::array();
      for (const auto& r : run.rows) rows.push_back(verdict_json(r));
      o.results["rows"] = rows;
      o.results["all_agree"] = oracle ? ojson(run.all_agree) : ojson(nullptr);
    } else if (name == "verify") {
      if (suite == "kernel-b2") {
        o = verify_kernel_b(rank == 0 ? 2 : rank, prime == 0 ? 2 : prime);
      } else if (suite == "ratios") {
        o = verify_ratios(resolve_type(type, rank));
      } else {
        const DynkinType t = resolve_type(type, rank);
        if (prime == 0) fail(ErrorCode::InvalidRing, "--prime is required for suite " + suite);
        if (suite == "casimir") o = verify_casimir(t, prime);
        else if (suite == "derivations") o = verify_derivations(t, prime);
        else o = verify_cohomology(t, prime);
      }
    } else if (name == "sl2-decompose") {
      WeightedModule m = [&] {
        if (!file.empty()) return parse_module(read_json_file(file));
        if (builtin.empty()) fail(ErrorCode::Schema, "one of --file or --builtin is required");
        if (prime == 0) fail(ErrorCode::InvalidRing, "--prime is required for builtin modules");
        if (builtin == "counterexample") return counterexample_module(require_prime(prime));
        if (builtin.rfind("chain:", 0) == 0) {
          std::size_t used = 0;
          long long j = 0;
          try {
            j = std::stoll(builtin.substr(6), &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used == 0 || used != builtin.size() - 6) fail(ErrorCode::Schema, "cannot parse '" + builtin + "'");
          return chain_from_highest(j, require_prime(prime));
        }
        fail(ErrorCode::Schema, "unknown builtin '" + builtin + "'");
      }();
      o = cmd_sl2(m, strict);
    } else if (name == "lift-aut") {
      o = cmd_lift(type.empty() ? DynkinType::make(Series::A, 1) : resolve_type(type, rank), prime, sigma_file, ext_name);
    } else if (name == "cohomology") {
      const LieAlgebra g = LieAlgebra::chevalley(resolve_type(type, rank), RingSpec::prime_field(require_prime(prime)));
      o.results = cohomology_json(ce_complex(g));
    } else {
      o = cmd_presentation(resolve_type(type, rank));
    }
    emit(out, name, inputs, o);
    if (o.exit_code == kExitDecompositionFailed) err << "lieform: decomposition failed\n";
    if (o.exit_code == kExitMismatch) err << "lieform: prediction and oracle disagree\n";
    return o.exit_code;
  } catch (const Error& e) {
    Outcome o;
    o.status = "ERROR";
    o.exit_code = kExitError;
    o.results["error"] = std::string(error_name(e.code()));
    o.results["message"] = e.what();
    emit(out, name, inputs, o);
    err << "lieform: " << error_name(e.code()) << ": " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace lieform
