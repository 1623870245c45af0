#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specbox {

enum class Bc { Dirichlet, Neumann };

char bc_char(Bc b);
Bc bc_from_char(char c);

/// Rectangular box [0,a_i]^n with a Dirichlet/Neumann condition on each face.
/// The doubled cell R0 = [-a_i, a_i]^n is the fundamental domain of the
/// lattice L = {(2 m_1 a_1, ..., 2 m_n a_n)}.
struct BoxProblem {
  std::vector<double> sides;
  std::vector<std::array<Bc, 2>> bc;  // bc[i] = (condition at x_i=0, at x_i=a_i)

  int dim() const { return static_cast<int>(sides.size()); }
  double volume() const;          // |R|
  double cell_volume() const;     // |R0| = 2^n |R|
  void validate() const;

  static BoxProblem all_dirichlet(std::vector<double> sides);
};

using MultiIndex = std::vector<int>;

/// Finite cosine series q(x) = sum_m c_m prod_i cos(pi m_i x_i / a_i) on R,
/// all indices componentwise nonnegative. This is the input format for
/// potentials: it guarantees an even, real-analytic periodic extension.
struct CosineSpec {
  std::vector<double> sides;
  std::map<MultiIndex, double> terms;

  int dim() const { return static_cast<int>(sides.size()); }
  void validate() const;
  double evaluate(const std::vector<double>& x) const;

  std::string to_json() const;
  static CosineSpec from_json(const std::string& text);
};

/// Real even trigonometric polynomial on the doubled cell,
///   Q(x) = sum_m a_m exp(i pi sum_i m_i x_i / a_i),
/// stored on canonical orbit representatives (first nonzero component of m
/// positive), one coefficient per orbit {m, -m}. Always real and centrally
/// symmetric; coordinatewise evenness is a stronger property that holds for
/// extensions of CosineSpec inputs but not for general reduced potentials.
class TrigPotential {
 public:
  TrigPotential() = default;
  explicit TrigPotential(std::vector<double> sides);
  TrigPotential(std::vector<double> sides, std::map<MultiIndex, double> coeffs);

  int dim() const { return static_cast<int>(sides_.size()); }
  const std::vector<double>& sides() const { return sides_; }
  const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }

  double coeff(const MultiIndex& m) const;
  void add_coeff(const MultiIndex& m, double value);  // folds onto the orbit rep
  void prune();  // drop coefficients below 1e-15 * max |a_m|

  double evaluate(const std::vector<double>& x) const;
  double mean_value() const;           // a_0 = (1/|R0|) integral of Q
  TrigPotential subtract_mean() const;
  bool is_coordinatewise_even(double tol = 1e-14) const;

  /// sum |a_m| over the full exponential expansion; an upper bound for |Q|.
  double sup_bound() const;
  TrigPotential laplacian() const;     // termwise Delta Q
  TrigPotential scaled(double s) const;
  TrigPotential operator+(const TrigPotential& other) const;

  /// Cosine coefficients c_m (componentwise m >= 0); requires coordinatewise
  /// evenness.
  CosineSpec cosine_spec() const;

  uint64_t hash() const;

  static MultiIndex canonical(MultiIndex m, int* sign_flipped = nullptr);

 private:
  std::vector<double> sides_;
  std::map<MultiIndex, double> coeffs_;
};

/// One term of the decomposition Q(x) = sum_delta Q_delta(delta . x) over
/// canonical primitive directions. The series holds Q_delta(s) =
/// sum_{k>=1} b_k cos(2 pi k s); b[0] is unused and kept zero.
struct DirectionalComponent {
  MultiIndex direction;          // primitive, first nonzero component positive
  std::vector<double> series;    // b_k, index k
  double dual_norm;              // |delta|, delta_i = direction_i / (2 a_i)
};

TrigPotential build_potential(const CosineSpec& spec);
TrigPotential reflect_potential(const TrigPotential& p);
TrigPotential reduce_potential(const TrigPotential& p, const MultiIndex& k);
std::vector<DirectionalComponent> directional_decomposition(const TrigPotential& p);

/// Restriction of a coordinatewise-even potential to the coordinate line
/// x = t e_i: cosine coefficients v_k of q_i(t) = sum_k v_k cos(pi k t / a_i).
std::vector<double> coordinate_series(const TrigPotential& p, int dim_index);

struct IrrationalityReport {
  bool relation_found = false;
  std::vector<int> relation;  // p with sum p_i a_i^2 ~ 0
  int bound = 0;
  std::string to_json() const;
};

IrrationalityReport irrationality_scan(const BoxProblem& box, int bound);

}  // namespace specbox
