#pragma once

// Concrete poset families: complete simplicial complexes, downward closures
// of k-uniform hypergraphs, the Grassmann poset G_q(n,d), closures of
// subspace families, and weight-perturbed variants.

#include <cstdint>

#include "eposets/fq.hpp"
#include "eposets/poset.hpp"
#include "eposets/qcomb.hpp"

namespace eposets {

/// X(k) = all k-subsets of [n] with uniform top measure; R(k,i) = C(k,i).
std::pair<GradedPoset, Measure> complete_complex(int n, int d);

/// Downward closure of a k-uniform hypergraph. Faces are vertex-id sets;
/// throws MixedRankError if the faces have different sizes.
std::pair<GradedPoset, Measure> hypergraph_closure(int n,
                                                   const std::vector<std::vector<std::uint32_t>>& faces,
                                                   const std::vector<double>& weights);

/// The full Grassmann poset: X(k) enumerates all k-dimensional subspaces of
/// F_q^n by canonical RREF, ordered lexicographically by pivot columns then
/// entries; covers are codimension-1 inclusions; uniform top measure.
/// Throws NonPrimeQError / BudgetExceededError.
std::pair<GradedPoset, Measure> grassmann_poset(int q, int n, int d);

/// Downward closure of a family of d-dimensional subspaces of F_q^n.
std::pair<GradedPoset, Measure> subspace_closure(int q, int n,
                                                 const std::vector<FqMatrix>& spaces,
                                                 const std::vector<double>& weights);

/// pi_d(x) <- pi_d(x) (1 + u_x), u_x uniform in [-rho, rho), renormalized and
/// re-induced. Deterministic in the seed.
Measure perturbed_measure(const GradedPoset& poset, const Measure& measure, double rho,
                          std::uint64_t seed);

/// Sequentially-differential parameters of the full Grassmann poset.
double grassmann_delta(int i, int n, int q);

/// The n-independent q-expanding-poset parameters delta_i = q (q^i-1)/(q^{i+1}-1).
double qeposet_delta(int i, int q);

/// Sequentially-differential parameters of the complete complex on n
/// vertices (the q -> 1 limit of grassmann_delta).
double complete_complex_delta(int i, int n);

/// Density of a codimension-i co-link within the j-links of its members at
/// level k of the Grassmann over F_q^d; tends to q^{-i(k-j)} for large d.
double colink_density(int q, int d, int i, int j, int k);

/// Decodes a q-simplicial face key back into its RREF matrix.
FqMatrix face_to_matrix(const GradedPoset& poset, int level, std::uint32_t id);

/// Face key of an RREF matrix (row-major entries).
FaceKey matrix_to_face(const FqMatrix& m);

}  // namespace eposets
