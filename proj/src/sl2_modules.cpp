#include "lieform/sl2_modules.hpp"

#include <algorithm>
#include <set>

#include "lieform/lattice.hpp"

namespace lieform {

namespace {

const RingSpec kQ = RingSpec::rationals();

Matrix to_ring(const Matrix& m, const RingSpec& r) { return m.base_change(r); }

// Rational matrix -> Z_(p) matrix; nullopt when some denominator is divisible by p.
std::optional<Matrix> to_local(const Matrix& m, std::int64_t p) {
  if (m.ring() == RingSpec::localized_at(p)) return m;
  if (!is_p_integral(m, p)) return std::nullopt;
  return m.base_change(RingSpec::localized_at(p));
}

Matrix block_diagonal(const RingSpec& r, const std::vector<Matrix>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out(r, rows, cols);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(i, j).is_zero()) out.set(r0 + i, c0 + j, b(i, j));
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

// Ambient action matrix from one in lattice coordinates.
Matrix ambient(const WeightedModule& m, const Matrix& a) {
  return m.lattice * to_ring(a, kQ) * inverse(m.lattice);
}

bool in_column_span(const Matrix& span, const Matrix& v) {
  if (span.cols() == 0) return v.is_zero();
  return solve_linear(span, v).has_value();
}

Matrix hstack_all(const RingSpec& r, std::size_t rows, const std::vector<Matrix>& ms) {
  Matrix out(r, rows, 0);
  for (const auto& m : ms) out = out.hstack(m);
  return out;
}

Matrix comm(const Matrix& a, const Matrix& b) { return a * b - b * a; }

mpz_class factorial(std::int64_t n) {
  mpz_class f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= static_cast<long>(i);
  return f;
}

}  // namespace

const Matrix& WeightedModule::piece(std::int64_t weight) const {
  for (std::size_t k = 0; k < weights.size(); ++k)
    if (weights[k] == weight) return pieces[k];
  fail(ErrorCode::OutOfRange, "no weight " + std::to_string(weight));
}

bool WeightedModule::has_weight(std::int64_t weight) const {
  return std::find(weights.begin(), weights.end(), weight) != weights.end();
}

void WeightedModule::validate() const {
  auto bad = [](const std::string& why) { fail(ErrorCode::InvalidModule, why); };
  if (!is_prime(p)) bad("p must be prime");
  if (lattice.ring() != kQ) bad("lattice must be rational");
  const std::size_t n = lattice.rows();
  if (lattice.cols() != n || n == 0) bad("lattice basis must be square and nonempty");
  if (lieform::rank(lattice) != n) bad("lattice basis columns are dependent");
  if (weights.size() != pieces.size()) bad("one piece per weight is required");
  if (std::set<std::int64_t>(weights.begin(), weights.end()).size() != weights.size()) bad("weights repeat");
  std::size_t total = 0;
  for (const auto& pc : pieces) {
    if (pc.ring() != kQ || pc.rows() != n) bad("pieces must be rational with one row per ambient coordinate");
    if (pc.cols() == 0 || lieform::rank(pc) != pc.cols()) bad("piece bases must be nonempty and independent");
    total += pc.cols();
  }
  if (total != n) bad("piece ranks sum to " + std::to_string(total) + ", expected " + std::to_string(n));
  if (lieform::rank(hstack_all(kQ, n, pieces)) != n) bad("pieces do not form a direct sum of the ambient space");
  if (!labels.empty() && labels.size() != n) bad("label count differs from the ambient rank");
  if (!action) return;
  const RingSpec zp = ring();
  for (const Matrix* a : {&action->h, &action->x, &action->y})
    if (a->ring() != zp || a->rows() != n || a->cols() != n) bad("action matrices must be n x n over Z_(p)");
  const Matrix& h = action->h;
  const Matrix& x = action->x;
  const Matrix& y = action->y;
  const Scalar two(zp, 2LL);
  if (comm(h, x) != x.scaled(two)) bad("[h,x] != 2x");
  if (comm(h, y) != y.scaled(-two)) bad("[h,y] != -2y");
  if (comm(x, y) != h) bad("[x,y] != h");
  const Matrix ha = ambient(*this, h), xa = ambient(*this, x), ya = ambient(*this, y);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const std::int64_t w = weights[k];
    if (ha * pieces[k] != pieces[k].scaled(Scalar(kQ, static_cast<long long>(w))))
      bad("h does not act as " + std::to_string(w) + " on its weight piece");
    const Matrix up = xa * pieces[k], down = ya * pieces[k];
    if (!up.is_zero() && !(has_weight(w + 2) && in_column_span(piece(w + 2), up))) bad("x does not raise weights by 2");
    if (!down.is_zero() && !(has_weight(w - 2) && in_column_span(piece(w - 2), down))) bad("y does not lower weights by 2");
  }
}

WeightedModule chain_from_highest(std::int64_t j, std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "p must be prime");
  if (j < 1 || j > p - 1) fail(ErrorCode::OutOfRange, "highest weight must lie in [1, p-1]");
  const RingSpec zp = RingSpec::localized_at(p);
  const std::size_t n = static_cast<std::size_t>(j + 1);
  WeightedModule m{p, Matrix::identity(kQ, n), {}, {}, Sl2Action{Matrix(zp, n, n), Matrix(zp, n, n), Matrix(zp, n, n)}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<long long>(i);
    m.weights.push_back(j - 2 * ii);
    Matrix e(kQ, n, 1);
    e.set(i, 0, Scalar(kQ, 1LL));
    m.pieces.push_back(e);
    m.labels.push_back("z" + std::to_string(i));
    m.action->h.set(i, i, Scalar(zp, j - 2 * ii));
    if (i > 0) m.action->x.set(i - 1, i, Scalar(zp, j - ii + 1));
    if (i + 1 < n) m.action->y.set(i + 1, i, Scalar(zp, ii + 1));
  }
  return m;
}

WeightedModule counterexample_module(std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "p must be prime");
  const std::size_t n = static_cast<std::size_t>(p + 1);
  // Monomials m_i of weight p - 2i: x m_i = i m_{i-1}, y m_i = (p-i) m_{i+1}.
  Matrix h(kQ, n, n), x(kQ, n, n), y(kQ, n, n);
  WeightedModule m{p, Matrix::identity(kQ, n), {}, {}, std::nullopt, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<long long>(i);
    h.set(i, i, Scalar(kQ, p - 2 * ii));
    if (i > 0) x.set(i - 1, i, Scalar(kQ, ii));
    if (i + 1 < n) y.set(i + 1, i, Scalar(kQ, p - ii));
    m.weights.push_back(p - 2 * ii);
    Matrix e(kQ, n, 1);
    e.set(i, 0, Scalar(kQ, 1LL));
    m.pieces.push_back(e);
    m.labels.push_back("a" + std::to_string(p - 2 * ii));
  }
  // Lattice basis (m_0 + m_p)/p, m_1, ..., m_p.
  m.lattice.set(0, 0, Scalar::from_rational(kQ, mpq_class(1, static_cast<unsigned long>(p))));
  m.lattice.set(n - 1, 0, Scalar::from_rational(kQ, mpq_class(1, static_cast<unsigned long>(p))));
  const Matrix linv = inverse(m.lattice);
  auto local = [&](const Matrix& a) {
    auto l = to_local(linv * a * m.lattice, p);
    if (!l) fail(ErrorCode::InvalidModule, "counterexample lattice is not stable");
    return *l;
  };
  m.action = Sl2Action{local(h), local(x), local(y)};
  return m;
}

WeightedModule direct_sum(const std::vector<WeightedModule>& parts) {
  if (parts.empty()) fail(ErrorCode::InvalidModule, "empty direct sum");
  const std::int64_t p = parts.front().p;
  std::size_t n = 0;
  for (const auto& part : parts) {
    if (part.p != p) fail(ErrorCode::InvalidModule, "direct sum of modules over different primes");
    n += part.rank();
  }
  std::vector<Matrix> lattices;
  for (const auto& part : parts) lattices.push_back(part.lattice);
  WeightedModule m{p, block_diagonal(kQ, lattices), {}, {}, std::nullopt, {}};
  std::set<std::int64_t, std::greater<>> all;
  for (const auto& part : parts) all.insert(part.weights.begin(), part.weights.end());
  for (std::int64_t w : all) {
    Matrix piece(kQ, n, 0);
    std::size_t offset = 0;
    for (const auto& part : parts) {
      if (part.has_weight(w)) {
        const Matrix& src = part.piece(w);
        Matrix emb(kQ, n, src.cols());
        for (std::size_t i = 0; i < src.rows(); ++i)
          for (std::size_t c = 0; c < src.cols(); ++c)
            if (!src(i, c).is_zero()) emb.set(offset + i, c, src(i, c));
        piece = piece.hstack(emb);
      }
      offset += part.rank();
    }
    m.weights.push_back(w);
    m.pieces.push_back(piece);
  }
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (std::size_t i = 0; i < parts[k].rank(); ++i) {
      const std::string base = parts[k].labels.empty() ? "e" + std::to_string(i) : parts[k].labels[i];
      m.labels.push_back(base + "_" + std::to_string(k + 1));
    }
  }
  if (std::all_of(parts.begin(), parts.end(), [](const WeightedModule& w) { return w.action.has_value(); })) {
    const RingSpec zp = RingSpec::localized_at(p);
    std::vector<Matrix> hs, xs, ys;
    for (const auto& part : parts) {
      hs.push_back(part.action->h);
      xs.push_back(part.action->x);
      ys.push_back(part.action->y);
    }
    m.action = Sl2Action{block_diagonal(zp, hs), block_diagonal(zp, xs), block_diagonal(zp, ys)};
  }
  return m;
}

WeightedModule change_lattice_basis(const WeightedModule& m, const Matrix& change) {
  const RingSpec zp = m.ring();
  const Matrix c = change.ring() == zp ? change : change.base_change(zp);
  const Matrix cinv = inverse(c);  // throws Singular unless det is a Z_(p) unit
  WeightedModule out = m;
  out.lattice = m.lattice * c.base_change(kQ);
  if (m.action) out.action = Sl2Action{cinv * m.action->h * c, cinv * m.action->x * c, cinv * m.action->y * c};
  return out;
}

std::string format_vector(const Matrix& column, const std::vector<std::string>& labels) {
  mpz_class den = 1;
  for (std::size_t i = 0; i < column.rows(); ++i)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), column(i, 0).rational().get_den_mpz_t());
  std::string body;
  int terms = 0;
  for (std::size_t i = 0; i < column.rows(); ++i) {
    const mpq_class v = column(i, 0).rational() * den;
    const mpz_class c = v.get_num();
    if (c == 0) continue;
    const std::string label = i < labels.size() ? labels[i] : "e" + std::to_string(i);
    std::string coeff;
    if (c == 1) coeff = terms ? "+" : "";
    else if (c == -1) coeff = "-";
    else coeff = (c > 0 && terms ? "+" : "") + c.get_str() + "*";
    body += coeff + label;
    ++terms;
  }
  if (terms == 0) return "0";
  if (den == 1) return body;
  return (terms > 1 ? "(" + body + ")" : body) + "/" + den.get_str();
}

DecompositionResult extend_torus(const WeightedModule& m, const ExtendOptions& opts) {
  m.validate();
  const std::int64_t p = m.p;
  const RingSpec zp = m.ring();
  const RingSpec fp = RingSpec::prime_field(p);
  const std::size_t n = m.rank();
  const PTypeReport pt = classify_p_type(std::set<std::int64_t>(m.weights.begin(), m.weights.end()), p);
  DecompositionResult res;
  res.type1 = pt.is_type1;
  res.type2 = pt.is_type2;
  res.type3 = pt.is_type3;
  res.weights = m.weights;
  for (const auto& pc : m.pieces) res.pieces.push_back(saturate(m.lattice, pc, p));

  if (pt.is_type1) {
    res.path = "lagrange";
    Matrix h(zp, n, n);
    if (m.action) {
      h = m.action->h;
    } else {
      // h acts as the weight on each generic piece; it must preserve M.
      const Matrix pieces = hstack_all(kQ, n, m.pieces);
      Matrix diag(kQ, n, n);
      std::size_t c = 0;
      for (std::size_t k = 0; k < m.weights.size(); ++k)
        for (std::size_t j = 0; j < m.pieces[k].cols(); ++j, ++c)
          diag.set(c, c, Scalar(kQ, static_cast<long long>(m.weights[k])));
      auto local = to_local(inverse(m.lattice) * pieces * diag * inverse(pieces) * m.lattice, p);
      if (!local) fail(ErrorCode::InvalidModule, "the weight grading does not preserve the lattice");
      h = *local;
    }
    const Matrix id = Matrix::identity(zp, n);
    for (std::int64_t i0 : m.weights) {
      Matrix pi = id;
      for (std::int64_t i : m.weights) {
        if (i == i0) continue;
        const Scalar inv = Scalar(zp, static_cast<long long>(i0 - i)).inverse();
        pi = pi * (h - id.scaled(Scalar(zp, static_cast<long long>(i)))).scaled(inv);
      }
      res.projectors.push_back(pi);
    }
    res.success = true;
    return res;
  }

  if (!pt.is_type2 && opts.require_hypothesis)
    fail(ErrorCode::HypothesisNotMet, "weight set is of neither p-type 1 nor p-type 2");
  if (pt.is_type2 && !m.action) fail(ErrorCode::ActionMissing, "p-type 2 decomposition needs the sl2 action");
  res.path = "saturation";

  const Matrix assembled = hstack_all(kQ, n, res.pieces);
  const Matrix coords = lattice_coordinates(m.lattice, assembled);
  const Matrix coords_p = coords.base_change(fp);
  if (lieform::rank(coords_p) == n) {
    const Matrix k = coords.base_change(zp);
    const Matrix kinv = inverse(k);
    std::size_t c = 0;
    for (const auto& piece : res.pieces) {
      Matrix sel(zp, n, n);
      for (std::size_t j = 0; j < piece.cols(); ++j, ++c) sel.set(c, c, Scalar(zp, 1LL));
      res.projectors.push_back(k * sel * kinv);
    }
    res.success = true;
    return res;
  }

  // Localize the defect: pairs (i, i - p) where M_i + M_{i-p} misses N_i mod p.
  for (std::size_t a = 0; a < m.weights.size(); ++a) {
    const std::int64_t i = m.weights[a];
    if (!m.has_weight(i - p)) continue;
    std::size_t b = 0;
    while (m.weights[b] != i - p) ++b;
    const Matrix ni = saturate(m.lattice, m.pieces[a].hstack(m.pieces[b]), p);
    const Matrix pair_basis = res.pieces[a].hstack(res.pieces[b]);
    const Matrix in_ni = lattice_coordinates(ni, pair_basis).base_change(fp);
    if (lieform::rank(in_ni) == ni.cols()) continue;
    res.q_violations.emplace_back(i, i - p);
    if (res.failure_witness) continue;
    for (std::size_t col = 0; col < ni.cols(); ++col) {
      Matrix e(fp, ni.cols(), 1);
      e.set(col, 0, Scalar(fp, 1LL));
      if (lieform::rank(in_ni.hstack(e)) > lieform::rank(in_ni)) {
        const Matrix w = ni.column(col);
        res.failure_witness = FailureWitness{std::make_pair(i, i - p), w, format_vector(w, m.labels)};
        break;
      }
    }
  }
  if (!res.failure_witness) {
    // Dependency mod p among the assembled basis: w = sum a_k v_k / p.
    const Matrix ker = kernel_basis(coords_p);
    Matrix w(kQ, n, 1);
    for (std::size_t k = 0; k < n; ++k) {
      std::int64_t a = ker(k, 0).residue();
      if (a > p / 2) a -= p;
      if (a == 0) continue;
      for (std::size_t r = 0; r < n; ++r)
        if (!assembled(r, k).is_zero()) w.add_to(r, 0, assembled(r, k) * Scalar(kQ, static_cast<long long>(a)));
    }
    w = w.scaled(Scalar::from_rational(kQ, mpq_class(1, static_cast<unsigned long>(p))));
    res.failure_witness = FailureWitness{std::nullopt, w, format_vector(w, m.labels)};
  }
  return res;
}

Matrix exp_nilpotent(const Matrix& u, std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "p must be prime");
  if (!u.is_square()) fail(ErrorCode::DimensionMismatch, "exp_nilpotent needs a square matrix");
  const RingSpec& r = u.ring();
  if (!Scalar(r, factorial(p - 1)).is_unit())
    fail(ErrorCode::NotInvertible, "(p-1)! is not a unit in " + r.to_string());
  std::vector<Matrix> powers{Matrix::identity(r, u.rows())};
  for (std::int64_t l = 1; l <= p; ++l) powers.push_back(powers.back() * u);
  if (!powers.back().is_zero()) fail(ErrorCode::NotNilpotentEnough, "u^p is not zero");
  Matrix e = powers[0];
  for (std::int64_t l = 1; l < p; ++l) e += powers[l].scaled(Scalar(r, factorial(l)).inverse());
  return e;
}

}  // namespace lieform
