#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lieform {

enum class Series { A, B, C, D, E, F, G };

char series_letter(Series s);
Series parse_series(char c);

struct DynkinType {
  Series series;
  int rank;

  /// Validated constructor; throws InvalidRank.
  static DynkinType make(Series series, int rank);
  /// Parses "A4", "E8", "G2" (case-insensitive letter).
  static DynkinType parse(const std::string& name);

  std::string name() const;
  bool is_classical() const { return series <= Series::D; }

  friend bool operator==(const DynkinType& a, const DynkinType& b) {
    return a.series == b.series && a.rank == b.rank;
  }
  friend bool operator<(const DynkinType& a, const DynkinType& b) {
    return a.series != b.series ? a.series < b.series : a.rank < b.rank;
  }
};

bool valid_rank(Series series, int rank);

/// Every type of rank at most `max_rank`, ordered by (series, rank).
/// B1 and C1 are included only when `rank_one_aliases` is set.
std::vector<DynkinType> all_types(int max_rank, bool rank_one_aliases);

using Root = std::vector<int>;  // coordinates in the simple-root basis

class RootSystem {
 public:
  explicit RootSystem(DynkinType t);

  const DynkinType& dynkin() const { return dynkin_; }
  int rank() const { return dynkin_.rank; }
  /// cartan()[i][j] = <alpha_i, alpha_j^vee>.
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }
  /// Squared lengths of the simple roots; short roots have length 2.
  const std::vector<int>& simple_lengths() const { return lengths_; }
  /// Positive roots in canonical order: height ascending, then
  /// lexicographically larger coordinate vectors first.
  const std::vector<Root>& positive_roots() const { return positive_; }
  /// Positive roots followed by their negatives in the same order.
  const std::vector<Root>& roots() const { return roots_; }

  /// Index into roots(), or -1.
  int index_of(const Root& r) const;
  bool is_root(const Root& r) const { return index_of(r) >= 0; }
  int inner(const Root& a, const Root& b) const;
  int length2(const Root& a) const { return inner(a, a); }
  /// <a, b^vee> = 2(a,b)/(b,b).
  int pairing(const Root& a, const Root& b) const;
  static int height(const Root& r);
  const Root& highest_root() const { return positive_.back(); }

 private:
  DynkinType dynkin_;
  std::vector<std::vector<int>> cartan_;
  std::vector<int> lengths_;
  std::vector<std::vector<int>> form_;  // (alpha_i, alpha_j)
  std::vector<Root> positive_;
  std::vector<Root> roots_;
  std::map<Root, int> index_;
};

/// |det(Cartan matrix)|.
std::int64_t center_order(const DynkinType& t);

struct PTypeReport {
  std::set<std::int64_t> set;
  std::int64_t p;
  bool is_type1;
  bool is_type2;
  bool is_type3;
};

PTypeReport classify_p_type(const std::set<std::int64_t>& s, std::int64_t p);

}  // namespace lieform
