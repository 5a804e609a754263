#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace monferm {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

enum class Boundary { Open, Periodic };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

// Physical parameters of the chain. V is the nearest-neighbour
// density-density coupling per unordered bond: H_int = V sum_x n_x n_{x+1}.
struct ModelParams {
  int L = 8;
  double J1 = 1.0;
  cplx J2{0.0, 0.0};
  double V = 0.0;
  double gamma = 0.5;
  double n0 = 0.5;
  Boundary boundary = Boundary::Open;

  // L * n0, rounded. validate() guarantees it is an exact integer.
  int particle_number() const;

  // Throws InvalidArgument on any violated invariant.
  void validate() const;
};

// h_{x,x+1} = -J1, h_{x,x+2} = -J2 and Hermitian conjugates.
CMatrix build_hamiltonian(const ModelParams& p);

// Single-particle dispersion of the translation-invariant chain.
double dispersion(const ModelParams& p, double k);
double group_velocity(const ModelParams& p, double k);

enum class SymmetryClass { AIII, BDI, InteractingAIII };

std::string to_string(SymmetryClass c);

SymmetryClass classify_symmetry(const ModelParams& p);

struct CharacteristicScales {
  double v0 = 0.0;
  double ell0 = 0.0;
  double g0 = 0.0;
  double Ddiff = 0.0;
};

// v0 from a uniform n_k-point quadrature of the squared group velocity
// over the Brillouin zone.
CharacteristicScales characteristic_scales(const ModelParams& p, int n_k = 4096);

}  // namespace monferm
