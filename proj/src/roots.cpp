#include "lieform/roots.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "lieform/errors.hpp"
#include "lieform/matrix.hpp"

namespace lieform {

char series_letter(Series s) { return "ABCDEFG"[static_cast<int>(s)]; }

Series parse_series(char c) {
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u < 'A' || u > 'G') fail(ErrorCode::InvalidRank, std::string("unknown series '") + c + "'");
  return static_cast<Series>(u - 'A');
}

bool valid_rank(Series series, int rank) {
  switch (series) {
    case Series::A:
    case Series::B:
    case Series::C: return rank >= 1;
    case Series::D: return rank >= 3;
    case Series::E: return rank >= 6 && rank <= 8;
    case Series::F: return rank == 4;
    case Series::G: return rank == 2;
  }
  return false;
}

DynkinType DynkinType::make(Series series, int rank) {
  if (!valid_rank(series, rank))
    fail(ErrorCode::InvalidRank, std::string("invalid rank ") + std::to_string(rank) + " for series " + series_letter(series));
  return {series, rank};
}

DynkinType DynkinType::parse(const std::string& name) {
  if (name.size() < 2) fail(ErrorCode::InvalidRank, "cannot parse Dynkin type '" + name + "'");
  const Series s = parse_series(name[0]);
  int r = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) fail(ErrorCode::InvalidRank, "cannot parse Dynkin type '" + name + "'");
    r = r * 10 + (name[i] - '0');
    if (r > 1000) fail(ErrorCode::InvalidRank, "rank too large in '" + name + "'");
  }
  return make(s, r);
}

std::string DynkinType::name() const { return std::string(1, series_letter(series)) + std::to_string(rank); }

std::vector<DynkinType> all_types(int max_rank, bool rank_one_aliases) {
  std::vector<DynkinType> out;
  for (int s = 0; s < 7; ++s) {
    const auto series = static_cast<Series>(s);
    for (int r = 1; r <= max_rank; ++r) {
      if (!valid_rank(series, r)) continue;
      if (!rank_one_aliases && r == 1 && (series == Series::B || series == Series::C)) continue;
      out.push_back({series, r});
    }
  }
  return out;
}

namespace {

struct Diagram {
  std::vector<int> lengths;
  std::vector<std::pair<int, int>> edges;
};

Diagram diagram(const DynkinType& t) {
  const int n = t.rank;
  Diagram d;
  d.lengths.assign(static_cast<std::size_t>(n), 2);
  auto chain = [&](int upto) {
    for (int i = 0; i + 1 < upto; ++i) d.edges.emplace_back(i, i + 1);
  };
  switch (t.series) {
    case Series::A: chain(n); break;
    case Series::B:
      chain(n);
      std::fill(d.lengths.begin(), d.lengths.end(), 4);
      d.lengths[static_cast<std::size_t>(n - 1)] = 2;
      break;
    case Series::C:
      chain(n);
      d.lengths[static_cast<std::size_t>(n - 1)] = 4;
      break;
    case Series::D:
      chain(n - 1);
      d.edges.emplace_back(n - 3, n - 1);
      break;
    case Series::E:
      d.edges = {{0, 2}, {2, 3}, {3, 4}, {1, 3}};
      for (int i = 4; i + 1 < n; ++i) d.edges.emplace_back(i, i + 1);
      break;
    case Series::F:
      chain(4);
      d.lengths = {4, 4, 2, 2};
      break;
    case Series::G:
      chain(2);
      d.lengths = {2, 6};
      break;
  }
  if (n == 1) d.lengths = {2};
  return d;
}

}  // namespace

RootSystem::RootSystem(DynkinType t) : dynkin_(DynkinType::make(t.series, t.rank)) {
  const int n = t.rank;
  const Diagram d = diagram(t);
  lengths_ = d.lengths;
  form_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) form_[i][i] = lengths_[i];
  for (auto [i, j] : d.edges) {
    const int v = -std::max(lengths_[i], lengths_[j]) / 2;
    form_[i][j] = form_[j][i] = v;
  }
  cartan_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cartan_[i][j] = 2 * form_[i][j] / lengths_[j];

  // Close the simple roots under simple reflections.
  std::set<Root> seen;
  std::deque<Root> queue;
  for (int i = 0; i < n; ++i) {
    Root r(static_cast<std::size_t>(n), 0);
    r[i] = 1;
    seen.insert(r);
    queue.push_back(r);
  }
  while (!queue.empty()) {
    Root b = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      int c = 0;
      for (int j = 0; j < n; ++j) c += b[j] * cartan_[j][i];
      Root s = b;
      s[i] -= c;
      if (seen.insert(s).second) queue.push_back(s);
    }
  }
  for (const auto& r : seen)
    if (std::all_of(r.begin(), r.end(), [](int x) { return x >= 0; })) positive_.push_back(r);
  std::sort(positive_.begin(), positive_.end(), [](const Root& a, const Root& b) {
    const int ha = height(a), hb = height(b);
    if (ha != hb) return ha < hb;
    return a > b;
  });
  roots_ = positive_;
  for (const auto& r : positive_) {
    Root m = r;
    for (auto& x : m) x = -x;
    roots_.push_back(m);
  }
  for (std::size_t k = 0; k < roots_.size(); ++k) index_[roots_[k]] = static_cast<int>(k);
}

int RootSystem::index_of(const Root& r) const {
  auto it = index_.find(r);
  return it == index_.end() ? -1 : it->second;
}

int RootSystem::inner(const Root& a, const Root& b) const {
  int s = 0;
  for (int i = 0; i < rank(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank(); ++j) s += a[i] * b[j] * form_[i][j];
  }
  return s;
}

int RootSystem::pairing(const Root& a, const Root& b) const { return 2 * inner(a, b) / length2(b); }

int RootSystem::height(const Root& r) {
  int h = 0;
  for (int x : r) h += x;
  return h;
}

std::int64_t center_order(const DynkinType& t) {
  const RootSystem rs(t);
  const RingSpec z = RingSpec::integers();
  Matrix c(z, static_cast<std::size_t>(t.rank), static_cast<std::size_t>(t.rank));
  for (int i = 0; i < t.rank; ++i)
    for (int j = 0; j < t.rank; ++j) c.set(i, j, Scalar(z, static_cast<long long>(rs.cartan()[i][j])));
  mpz_class d = determinant(c).rational().get_num();
  return std::abs(d.get_si());
}

PTypeReport classify_p_type(const std::set<std::int64_t>& s, std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "classify_p_type: p must be prime");
  PTypeReport r{s, p, true, true, true};
  std::set<std::int64_t> residues;
  for (std::int64_t x : s) {
    if (!residues.insert(((x % p) + p) % p).second) r.is_type1 = false;
    if (x < -p + 1 || x > p - 1) r.is_type2 = false;
    if (2 * x < -p + 1 || 2 * x > p - 1) r.is_type3 = false;
  }
  return r;
}

}  // namespace lieform
