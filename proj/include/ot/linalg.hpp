#pragma once

#include <cstddef>
#include <span>

#include "ot/matrix.hpp"

namespace ot {

/// Hermitian matrix, A == A^dagger up to 1e-12 (relative to max(1, |A|_max)).
class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m);
    /// Real symmetric input; exact Hermitian by construction.
    static HermitianMatrix from_real(const RealMatrix& m);

    std::size_t size() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    /// Real diagonal (A_11, ..., A_nn).
    RealVector diagonal() const;

private:
    ComplexMatrix m_;
};

/// Skew-Hermitian matrix (an element of u(n)), A == -A^dagger up to 1e-12.
class SkewHermitianMatrix {
public:
    explicit SkewHermitianMatrix(ComplexMatrix m);
    /// i * diag(values)
    static SkewHermitianMatrix imaginary_diagonal(std::span<const double> values);
    /// Projects an arbitrary square matrix onto its skew-Hermitian part (M - M^dagger)/2.
    static SkewHermitianMatrix skew_part(const ComplexMatrix& m);

    std::size_t size() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    /// -i * A, the Hermitian matrix whose spectrum is the real spectrum of A/i.
    HermitianMatrix divided_by_i() const;

private:
    ComplexMatrix m_;
};

/// Unitary matrix, |Q^dagger Q - I|_max <= 1e-10.
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(ComplexMatrix m);
    static UnitaryMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }

private:
    ComplexMatrix m_;
};

struct Eigensystem {
    RealVector values;    // nonincreasing
    UnitaryMatrix vectors;  // columns are eigenvectors, A = Q diag(values) Q^dagger
    int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver. Eigenvalues are sorted nonincreasing,
/// ties kept in the order in which they emerge on the diagonal.
/// Throws ConvergenceError carrying the off-diagonal norm after `max_sweeps`.
Eigensystem jacobi_eigh(const HermitianMatrix& a, int max_sweeps = 100);

/// Q diag(d) Q^dagger
ComplexMatrix conjugate_diagonal(const ComplexMatrix& q, std::span<const double> d);
/// U A U^dagger
ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& a);

/// AB - BA
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
SkewHermitianMatrix commutator(const SkewHermitianMatrix& a, const SkewHermitianMatrix& b);

/// Re Tr(AB)
double trace_pairing(const ComplexMatrix& a, const ComplexMatrix& b);
inline double trace_pairing(const SkewHermitianMatrix& a, const SkewHermitianMatrix& b) {
    return trace_pairing(a.matrix(), b.matrix());
}

/// Solves A X = B by LU with partial pivoting. Throws InvariantError if A is
/// numerically singular or contains non-finite entries.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Cayley transform (I - A)^{-1} (I + A), unitary for skew-Hermitian A.
UnitaryMatrix cayley(const SkewHermitianMatrix& a);

/// max |A - A^dagger| and max |A + A^dagger|.
double hermitian_residual(const ComplexMatrix& a);
double skew_hermitian_residual(const ComplexMatrix& a);

}  // namespace ot
