#include "lieform/chevalley.hpp"

#include <algorithm>
#include <random>

#include <gmpxx.h>

namespace lieform {

namespace {

Root negate(Root r) {
  for (auto& x : r) x = -x;
  return r;
}

Root add(const Root& a, const Root& b) {
  Root c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

Root sub(const Root& a, const Root& b) { return add(a, negate(b)); }

bool positive(const Root& r) {
  for (int x : r)
    if (x != 0) return x > 0;
  return false;
}

}  // namespace

ChevalleyPresentation::ChevalleyPresentation(DynkinType t) : roots_(t) {
  const std::size_t r = rank();
  const auto& rts = roots_.roots();
  const auto& pos = roots_.positive_roots();
  dim_ = r + rts.size();
  for (std::size_t i = 0; i < r; ++i) labels_.push_back("H" + std::to_string(i + 1));
  for (const auto& a : rts) {
    std::string s = "X[";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    labels_.push_back(s + "]");
  }

  // Extraspecial pairs: smallest alpha (canonical order) with xi - alpha positive.
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (RootSystem::height(pos[k]) == 1) continue;
    for (std::size_t a = 0; a < k; ++a) {
      const Root rest = sub(pos[k], pos[a]);
      const int idx = roots_.index_of(rest);
      if (idx >= 0 && positive(rest)) {
        extraspecial_[static_cast<int>(k)] = {static_cast<int>(a), idx};
        break;
      }
    }
  }

  table_.assign(dim_ * dim_, {});
  auto put = [&](std::size_t i, std::size_t j, std::size_t k, std::int64_t c) {
    if (c == 0) return;
    table_[i * dim_ + j].push_back({k, c});
    table_[j * dim_ + i].push_back({k, -c});
  };
  for (std::size_t i = 0; i < r; ++i) {
    Root ai(r, 0);
    ai[i] = 1;
    for (std::size_t k = 0; k < rts.size(); ++k) put(i, r + k, r + k, roots_.pairing(rts[k], ai));
  }
  for (std::size_t a = 0; a < rts.size(); ++a) {
    for (std::size_t b = a + 1; b < rts.size(); ++b) {
      const Root s = add(rts[a], rts[b]);
      if (std::all_of(s.begin(), s.end(), [](int x) { return x == 0; })) {
        // [X_a, X_{-a}] = H_a = sum_i a_i (|alpha_i|^2/|a|^2) H_i
        const int la = roots_.length2(rts[a]);
        for (std::size_t i = 0; i < r; ++i) {
          const int c = rts[a][i] * roots_.simple_lengths()[i] / la;
          if (c != 0) table_[(r + a) * dim_ + (r + b)].push_back({i, c});
          if (c != 0) table_[(r + b) * dim_ + (r + a)].push_back({i, -c});
        }
        continue;
      }
      const int idx = roots_.index_of(s);
      if (idx < 0) continue;
      put(r + a, r + b, r + static_cast<std::size_t>(idx), compute_n(static_cast<int>(a), static_cast<int>(b)));
    }
  }
}

std::size_t ChevalleyPresentation::root_index(const Root& r) const {
  const int idx = roots_.index_of(r);
  if (idx < 0) fail(ErrorCode::OutOfRange, "not a root");
  return rank() + static_cast<std::size_t>(idx);
}

std::int64_t ChevalleyPresentation::structure_constant(const Root& a, const Root& b) const {
  const int ia = roots_.index_of(a), ib = roots_.index_of(b);
  if (ia < 0 || ib < 0) return 0;
  const Root s = add(a, b);
  if (!roots_.is_root(s)) return 0;
  for (const auto& term : bracket(rank() + static_cast<std::size_t>(ia), rank() + static_cast<std::size_t>(ib)))
    return term.coeff;
  return 0;
}

std::pair<Root, Root> ChevalleyPresentation::extraspecial_pair(const Root& xi) const {
  const int k = roots_.index_of(xi);
  auto it = extraspecial_.find(k);
  if (it == extraspecial_.end()) fail(ErrorCode::OutOfRange, "root has no extraspecial pair");
  return {roots_.roots()[it->second.first], roots_.roots()[it->second.second]};
}

// N_{a,b} for root indices a, b with a + b a root. Carter's reduction to
// extraspecial pairs: both-negative pairs via N_{-r,-s} = -N_{r,s}, mixed
// pairs via N_{r,s}/(t,t) = N_{s,t}/(r,r) = N_{t,r}/(s,s) with r+s+t = 0,
// and non-extraspecial positive pairs via the four-root identity.
std::int64_t ChevalleyPresentation::compute_n(int a, int b) {
  if (auto it = n_.find({a, b}); it != n_.end()) return it->second;
  const auto& rts = roots_.roots();
  const Root& r = rts[a];
  const Root& s = rts[b];
  const Root xi = add(r, s);
  const int ixi = roots_.index_of(xi);
  if (ixi < 0) return 0;
  auto idx = [&](const Root& x) { return roots_.index_of(x); };
  std::int64_t result = 0;
  const bool pr = positive(r), ps = positive(s);
  if (pr && ps) {
    if (a > b) {
      result = -compute_n(b, a);
    } else {
      const auto [ia, ib] = extraspecial_.at(ixi);
      int p = 0;
      for (Root x = sub(s, r); roots_.is_root(x); x = sub(x, r)) ++p;
      if (ia == a) {
        result = p + 1;
      } else {
        const Root& al = rts[ia];
        const Root& be = rts[ib];
        const std::int64_t n_ab = compute_n(ia, ib);
        mpq_class acc = 0;
        const Root s_al = sub(s, al), r_al = sub(r, al);
        if (roots_.is_root(s_al)) {
          acc += mpq_class(compute_n(b, idx(negate(al))) * compute_n(a, idx(negate(be))), roots_.length2(s_al));
        }
        if (roots_.is_root(r_al)) {
          acc += mpq_class(compute_n(idx(negate(al)), a) * compute_n(b, idx(negate(be))), roots_.length2(r_al));
        }
        // N_{-alpha,-beta} = -N_{alpha,beta}
        mpq_class v = mpq_class(-roots_.length2(xi)) * acc / mpq_class(-n_ab);
        v.canonicalize();
        if (v.get_den() != 1) fail(ErrorCode::NotALieAlgebra, "non-integral structure constant");
        result = v.get_num().get_si();
      }
    }
  } else if (!pr && !ps) {
    result = -compute_n(idx(negate(r)), idx(negate(s)));
  } else {
    const Root t = negate(xi);
    const int it = idx(t);
    if (positive(t) == pr) {
      // t and r share a sign: N_{r,s} = (t,t)/(s,s) N_{t,r}
      const std::int64_t ntr = compute_n(it, a);
      result = ntr * roots_.length2(t) / roots_.length2(s);
    } else {
      // s and t share a sign: N_{r,s} = (t,t)/(r,r) N_{s,t}
      const std::int64_t nst = compute_n(b, it);
      result = nst * roots_.length2(t) / roots_.length2(r);
    }
  }
  n_[{a, b}] = result;
  return result;
}

bool check_jacobi(const ChevalleyPresentation& g, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = g.dim();
  std::vector<std::int64_t> acc(n, 0);
  std::vector<std::size_t> touched;
  auto add_bracket_of = [&](std::size_t i, const std::vector<StructureTerm>& v, int sign) {
    for (const auto& t : v)
      for (const auto& u : g.bracket(i, t.index)) {
        if (acc[u.index] == 0) touched.push_back(u.index);
        acc[u.index] += sign * t.coeff * u.coeff;
      }
  };
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    touched.clear();
    // [i,[j,k]] + [j,[k,i]] + [k,[i,j]]
    add_bracket_of(i, g.bracket(j, k), 1);
    add_bracket_of(j, g.bracket(k, i), 1);
    add_bracket_of(k, g.bracket(i, j), 1);
    bool ok = true;
    for (std::size_t t : touched) {
      if (acc[t] != 0) ok = false;
      acc[t] = 0;
    }
    return ok;
  };
  if (samples == 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
          if (!check(i, j, k)) return false;
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s)
    if (!check(pick(rng), pick(rng), pick(rng))) return false;
  return true;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

namespace {

struct Generators {
  std::size_t size;
  std::vector<Matrix> e, f;
};

Generators classical_generators(const DynkinType& t) {
  const RingSpec z = RingSpec::integers();
  const int n = t.rank;
  Generators g;
  auto unit = [&](std::size_t i, std::size_t j, long long v, Matrix& m) { m.add_to(i, j, Scalar(z, v)); };
  auto blank = [&] { return Matrix(z, g.size, g.size); };
  switch (t.series) {
    case Series::A:
      g.size = static_cast<std::size_t>(n + 1);
      for (int i = 0; i < n; ++i) {
        Matrix e = blank();
        unit(i, i + 1, 1, e);
        g.e.push_back(e);
        g.f.push_back(e.transpose());
      }
      break;
    case Series::C:
    case Series::D: {
      const std::size_t m = static_cast<std::size_t>(n);
      g.size = 2 * m;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        Matrix e = blank();
        unit(i, i + 1, 1, e);
        unit(m + i + 1, m + i, -1, e);
        g.e.push_back(e);
        g.f.push_back(e.transpose());
      }
      Matrix e = blank();
      if (t.series == Series::C) {
        unit(m - 1, 2 * m - 1, 1, e);
      } else {
        unit(m - 2, 2 * m - 1, 1, e);
        unit(m - 1, 2 * m - 2, -1, e);
      }
      g.e.push_back(e);
      g.f.push_back(e.transpose());
      break;
    }
    case Series::B: {
      // Index 0 carries x_0; indices 1..n and n+1..2n are paired.
      const std::size_t m = static_cast<std::size_t>(n);
      g.size = 2 * m + 1;
      for (std::size_t i = 1; i < m; ++i) {
        Matrix e = blank();
        unit(i, i + 1, 1, e);
        unit(m + i + 1, m + i, -1, e);
        g.e.push_back(e);
        g.f.push_back(e.transpose());
      }
      Matrix e = blank(), f = blank();
      unit(m, 0, 2, e);
      unit(0, 2 * m, -1, e);
      unit(0, m, 1, f);
      unit(2 * m, 0, -2, f);
      g.e.push_back(e);
      g.f.push_back(f);
      break;
    }
    default: fail(ErrorCode::NotClassical, "no matrix realization for type " + t.name());
  }
  return g;
}

Matrix divide_exact(const Matrix& m, std::int64_t d) {
  const RingSpec z = RingSpec::integers();
  Matrix out(z, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const mpz_class v = m(i, j).rational().get_num();
      if (v % d != 0) fail(ErrorCode::NotALieAlgebra, "realization entry not divisible");
      out.set(i, j, Scalar(z, mpz_class(v / d)));
    }
  return out;
}

}  // namespace

MatrixRealization matrix_realization(DynkinType t) {
  if (!t.is_classical()) fail(ErrorCode::NotClassical, "no matrix realization for type " + t.name());
  ChevalleyPresentation pres(t);
  const Generators gens = classical_generators(t);
  const std::size_t r = pres.rank();
  const RootSystem& rs = pres.roots();
  const auto& pos = rs.positive_roots();
  std::vector<Matrix> mats(pres.dim(), Matrix(RingSpec::integers(), gens.size, gens.size));
  for (std::size_t i = 0; i < r; ++i) mats[i] = commutator(gens.e[i], gens.f[i]);
  const std::size_t npos = pos.size();
  for (std::size_t k = 0; k < npos; ++k) {
    const Root& xi = pos[k];
    if (RootSystem::height(xi) == 1) {
      const std::size_t i = static_cast<std::size_t>(std::find(xi.begin(), xi.end(), 1) - xi.begin());
      mats[r + k] = gens.e[i];
      mats[r + npos + k] = gens.f[i];
      continue;
    }
    const auto [al, be] = pres.extraspecial_pair(xi);
    Root nal = al, nbe = be;
    for (auto& x : nal) x = -x;
    for (auto& x : nbe) x = -x;
    const std::int64_t n_pos = pres.structure_constant(al, be);
    const std::int64_t n_neg = pres.structure_constant(nal, nbe);
    mats[r + k] = divide_exact(commutator(mats[pres.root_index(al)], mats[pres.root_index(be)]), n_pos);
    mats[r + npos + k] = divide_exact(commutator(mats[pres.root_index(nal)], mats[pres.root_index(nbe)]), n_neg);
  }
  const std::size_t size = gens.size;
  return {std::move(pres), std::move(mats), size};
}

bool check_bracket_compatible(const MatrixRealization& r) {
  const auto& g = r.presentation;
  const RingSpec z = RingSpec::integers();
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = i + 1; j < g.dim(); ++j) {
      Matrix expect(z, r.module_rank, r.module_rank);
      for (const auto& t : g.bracket(i, j)) expect += r.matrices[t.index].scaled(Scalar(z, static_cast<long long>(t.coeff)));
      if (commutator(r.matrices[i], r.matrices[j]) != expect) return false;
    }
  return true;
}

}  // namespace lieform
