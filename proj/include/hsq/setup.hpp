#pragma once

#include <map>
#include <string>
#include <vector>

#include "hsq/algebra.hpp"

namespace hsq {

// g -> J op(g) J^-1, op = optional inverse-transpose and/or entrywise conjugation.
struct InvolutionSpec {
    Mat conj_matrix;
    bool inverse_transpose = false;
    bool entrywise_conjugate = false;
};

Mat apply_involution(const InvolutionSpec& inv, const Mat& g);
// Differential on the Lie algebra.
Mat apply_involution_algebra(const InvolutionSpec& inv, const Mat& z);

enum class Constraint { DetOne, Real, Unitary };
const char* constraint_name(Constraint c);

struct GroupSpec {
    std::string name;
    int n = 0;
    std::vector<Mat> algebra_spanning;
    InvolutionSpec sigma, theta, delta, phi;
    std::vector<Constraint> constraints;
    bool assume_hg0k = true;
    std::vector<Mat> component_reps;
};

bool satisfies_constraints(const GroupSpec& spec, const Mat& g, const Tol& tol, std::string* why = nullptr);

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool ok() const;
    const CheckResult* first_failure() const;
};

ValidationReport validate_setup(const GroupSpec& spec, const Tol& tol);

// Subspaces of g as orthonormal coordinate columns.
struct Decomposition {
    RMat h, q, k, p, g0, r0;
    RMat h_g0, h_r0, q_g0, q_r0, p_q, p_q_g0, p_q_r0;
    std::vector<Mat> u_h;  // orthonormal basis of (h ∩ g0) + i (h ∩ r0)
    int u_h_compact = 0;   // leading u_h entries coming from h ∩ g0
    std::map<std::string, int> dims() const;
};

class SymmetricSpace {
public:
    // Validates and decomposes; throws InvalidSetup on the first hard failure.
    static SymmetricSpace create(const GroupSpec& spec, const Tol& tol);

    const GroupSpec& spec() const { return spec_; }
    const Tol& tol() const { return tol_; }
    const AlgebraBasis& algebra() const { return basis_; }
    const Decomposition& decomposition() const { return dec_; }
    const ValidationReport& validation() const { return report_; }
    int n() const { return spec_.n; }
    int dim() const { return basis_.dim(); }

    const RMat& sigma_map() const { return m_sigma_; }
    const RMat& theta_map() const { return m_theta_; }
    const RMat& delta_map() const { return m_delta_; }

    Mat sigma(const Mat& g) const { return apply_involution(spec_.sigma, g); }
    Mat theta(const Mat& g) const { return apply_involution(spec_.theta, g); }
    Mat delta(const Mat& g) const { return apply_involution(spec_.delta, g); }
    Mat sigma_alg(const Mat& z) const { return apply_involution_algebra(spec_.sigma, z); }
    Mat theta_alg(const Mat& z) const { return apply_involution_algebra(spec_.theta, z); }
    Mat delta_alg(const Mat& z) const { return apply_involution_algebra(spec_.delta, z); }

    // Tolerance test for a residual of a quantity with magnitude scale.
    bool near(double residual, double scale = 1.0) const;

private:
    GroupSpec spec_;
    Tol tol_;
    AlgebraBasis basis_;
    Decomposition dec_;
    ValidationReport report_;
    RMat m_sigma_, m_theta_, m_delta_;
};

Decomposition decompose(const AlgebraBasis& basis, const RMat& m_sigma, const RMat& m_theta,
                        const RMat& m_delta, double rank_tol);
Decomposition decompose(const GroupSpec& spec, const Tol& tol);

// Spanning set of the traceless real n x n matrices.
std::vector<Mat> sl_real_basis(int n);

}  // namespace hsq
