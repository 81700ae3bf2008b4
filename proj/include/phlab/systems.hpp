// Torus endomorphisms: linear toral maps, products with a circle rotation, and
// the pitchfork perturbation of a linear map at a fixed point.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phlab/torus.hpp"

namespace phlab {

enum class SystemKind { Linear, ProductRotation, Mane };

const char* kind_name(SystemKind kind);

struct EigenPair {
  double value;
  Vec vector;  // unit length, largest-magnitude component positive
};

// Sorted by modulus, largest first.
using Eigendata = std::vector<EigenPair>;

// Throws NonSimpleSpectrum when two moduli agree within 1e-9 (complex pairs included).
Eigendata toral_eigendata(const IMat& matrix);
Eigendata real_eigendata(const Mat& matrix);

long long integer_det(const IMat& m);
IMat integer_adjugate(const IMat& m);

struct LinearToralSpec {
  IMat matrix;
  long long degree = 0;
  Eigendata eigen;
};

LinearToralSpec make_linear_spec(const IMat& matrix);

struct ManeParams {
  TorusPoint q;
  double rho = 0.0;
  double rho_inner = 0.0;
  double strength = 0.0;
};

// Asserted rates (lambda_s, lambda_1, lambda_2, lambda_u, C). Entries that do not
// apply in low dimension are NaN. C is metadata only.
struct PhConstants {
  double lambda_s;
  double lambda_1;
  double lambda_2;
  double lambda_u;
  double C;
};

class SystemSpec {
 public:
  static SystemSpec linear(const IMat& matrix);
  // Block map (A x) (+) (t + theta) on T^2 x T^1.
  static SystemSpec product_rotation(const IMat& a, double theta);

  int dim() const { return dim_; }
  SystemKind kind() const { return kind_; }
  // Integer action on the lattice: the lift satisfies F(x + k) = F(x) + M k.
  const IMat& matrix() const { return m_; }
  const Mat& matrix_real() const { return md_; }
  const Vec& translation() const { return b_; }
  long long det() const { return det_; }
  long long degree() const { return det_ < 0 ? -det_ : det_; }
  const Eigendata& eigendata() const { return eigen_; }
  double separation_exponent() const { return eps0_; }
  // Upper bound on the Lipschitz constant of the lift (operator norm, plus a sampled
  // bound on the perturbation for the mane kind).
  double lipschitz_bound() const { return lip_; }
  const PhConstants& ph_constants() const { return ph_; }
  double rotation() const { return b_.size() == 3 ? b_[2] : 0.0; }
  const std::optional<ManeParams>& mane() const { return mane_; }
  // Center vector and dual center covector of the base (mane kind only).
  const Vec& center_vector() const { return vc_; }
  const Vec& center_covector() const { return wc_; }

  bool has_stable() const;
  bool has_center() const { return dim_ == 3; }

  TorusPoint apply(const TorusPoint& x) const;
  // The lifted map on R^d.
  Vec apply_lift(const Vec& x) const;
  Mat jacobian(const TorusPoint& x) const;
  Mat jacobian_lift(const Vec& x) const;

  int branch_count() const { return static_cast<int>(cosets_.size()); }
  // Solves F(x) = y + k_branch on the lift (k_branch a coset representative).
  Vec preimage_lift(const Vec& y, int branch) const;
  TorusPoint preimage(const TorusPoint& y, int branch) const;
  // All preimages, ordered by branch index.
  std::vector<TorusPoint> preimages(const TorusPoint& y) const;
  // Preimage of y closest to ref; ties go to the lower branch index.
  TorusPoint nearest_preimage(const TorusPoint& y, const TorusPoint& ref, int* branch = nullptr) const;

  // Perturbation scalar g and its gradient (mane kind); zero elsewhere.
  double bump_profile(const Vec& x, Vec* grad) const;

  friend SystemSpec build_mane_example(const LinearToralSpec& base, const TorusPoint& q, double rho,
                                       double rho_inner, double strength);

 private:
  SystemSpec() = default;
  void finalize();
  void compute_separation_exponent();
  Vec newton_preimage(const Vec& target, const Vec& start) const;

  SystemKind kind_ = SystemKind::Linear;
  int dim_ = 0;
  IMat m_;
  Mat md_;
  Vec b_;
  long long det_ = 0;
  IMat adj_;
  std::vector<Vec> cosets_;
  Eigendata eigen_;
  double eps0_ = 0.0;
  double lip_ = 0.0;
  PhConstants ph_{};
  std::optional<ManeParams> mane_;
  Vec vc_, wc_;
  double width_ = 0.0;
};

SystemSpec build_mane_example(const LinearToralSpec& base, const TorusPoint& q, double rho, double rho_inner,
                              double strength);

// Named systems used in tests, docs and the CLI.
namespace catalog {
SystemSpec doubling();                // [2]
SystemSpec cat_map();                 // (2 1; 1 1)
SystemSpec anosov_endomorphism();     // (3 1; 1 1)
SystemSpec ph_linear();         // (100 1 0; -100 0 1; 3 0 0)
SystemSpec product_rotation();        // (3 1; 1 1) x rotation by the golden mean
SystemSpec mane(double strength = 0.1);
IMat ph_linear_matrix();
double golden_rotation();
}  // namespace catalog

}  // namespace phlab
