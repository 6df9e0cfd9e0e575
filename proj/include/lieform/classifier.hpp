#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lieform/lie_algebra.hpp"
#include "lieform/roots.hpp"

namespace lieform {

enum class Reason { P_EQ_2, A_DIV, B_DIV, C_DIV, D_DIV, EXC_P3, E8_P5, PERFECT };

std::string reason_name(Reason r);

struct PerfectnessVerdict {
  DynkinType dynkin;
  std::int64_t p;
  bool predicted;
  Reason reason;
  std::optional<bool> oracle;
  std::optional<bool> agree;
};

/// Closed-form prediction of whether the Killing form of the Chevalley
/// algebra of type t is perfect in characteristic p.
PerfectnessVerdict predict_perfect(DynkinType t, std::int64_t p);

/// Killing Gram of the Chevalley Z-form reduced mod p has full rank.
bool oracle_perfect(DynkinType t, std::int64_t p);

/// predict_perfect with oracle and agree filled in.
PerfectnessVerdict verdict_with_oracle(DynkinType t, std::int64_t p);

/// c with Killing Gram = c * trace Gram over Integers; NoConstantRatio otherwise.
std::int64_t ratio_check(DynkinType t);

/// Lie algebra spanned by integer matrices closed under commutator, with
/// structure constants in the given basis, over `ring` (an image of Z).
LieAlgebra matrix_lie_algebra(const std::vector<Matrix>& basis, const RingSpec& ring);

struct KernelWitness {
  int n;
  LieAlgebra algebra;             // Lie(SO_{2n+1}) over F_2
  std::vector<std::string> labels;
  std::vector<Vec> vectors;       // the 2n elements e_{0,i}
  std::vector<std::string> vector_labels;
  bool is_ideal;
  bool is_nilpotent;
  bool in_killing_kernel;
};

/// The ideal spanned by e_{0,1..2n} in so(2n+1) over F_2 for the form
/// x_0^2 + sum x_i x_{n+i}, with its three checks.
KernelWitness b_series_kernel_witness(int n);

}  // namespace lieform
