// Copyright 2026 The suplaw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Single-particle mode transformations: the Jx waveguide-array unitary, its
// mirror-phase symmetry, loss ancillas, and amplitude reconstruction from
// single-photon count matrices.
//
// Matrix convention: rows index output modes k, columns index input modes j.

#include "suplaw/combinatorics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace suplaw {

/// Angular-momentum generator J_x (hbar = 1): real symmetric tridiagonal with
/// [J_x]_{k,k+1} = sqrt(k (n - k)) / 2 for 1-based k.
inline ComplexMatrix jx_generator(int n) {
    if (n < 2) {
        throw std::invalid_argument("jx_generator: need n >= 2");
    }
    ComplexMatrix j = ComplexMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double v = 0.5 * std::sqrt(static_cast<double>(k) * (n - k));
        j(k - 1, k) = v;
        j(k, k - 1) = v;
    }
    return j;
}

/// exp(i J_x t) through the eigendecomposition of the real generator.
inline ComplexMatrix jx_unitary(int n, double t = kPi / 2) {
    if (!std::isfinite(t)) {
        throw std::invalid_argument("jx_unitary: evolution time must be finite");
    }
    RealMatrix gen = jx_generator(n).real();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gen);
    const RealMatrix &v = es.eigenvectors();
    ComplexVector phases(n);
    for (int i = 0; i < n; ++i) {
        phases(i) = std::polar(1.0, es.eigenvalues()(i) * t);
    }
    ComplexMatrix vc = v.cast<Complex>();
    return vc * phases.asDiagonal() * vc.transpose();
}

/// max_{k,j} |U_{k,n+1-j} - U_{k,j} exp(i pi [k - j + (n-1)/2])|.
inline double check_mirror_phase_symmetry(const ComplexMatrix &u) {
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("check_mirror_phase_symmetry: matrix must be square");
    }
    const int n = static_cast<int>(u.rows());
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= n; ++j) {
            double phase = kPi * (k - j + 0.5 * (n - 1));
            Complex expected = u(k - 1, j - 1) * std::polar(1.0, phase);
            worst = std::max(worst, std::abs(u(k - 1, n - j) - expected));
        }
    }
    return worst;
}

/// max |U^dagger U - I|.
inline double unitarity_defect(const ComplexMatrix &u) {
    ComplexMatrix g = u.adjoint() * u;
    g -= ComplexMatrix::Identity(g.rows(), g.cols());
    return g.cwiseAbs().maxCoeff();
}

/// Per-input-mode transmissivity, applied before the network.
struct LossConfig {
    std::vector<double> eta;

    static LossConfig lossless(int n) { return LossConfig{std::vector<double>(n, 1.0)}; }
};

/// (U (+) I_n) * B, where B couples input mode j to ancilla n+j with a
/// beamsplitter of transmission amplitude sqrt(eta_j). Real modes are 1..n,
/// ancillas n+1..2n.
inline ComplexMatrix extend_with_loss(const ComplexMatrix &u, const LossConfig &loss) {
    const int n = static_cast<int>(u.rows());
    if (u.cols() != n) {
        throw std::invalid_argument("extend_with_loss: matrix must be square");
    }
    if (static_cast<int>(loss.eta.size()) != n) {
        throw std::invalid_argument("extend_with_loss: need one transmissivity per mode");
    }
    ComplexMatrix b = ComplexMatrix::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        double e = loss.eta[j];
        if (!(e >= 0.0 && e <= 1.0)) {
            throw std::invalid_argument("extend_with_loss: transmissivity outside [0,1]");
        }
        double t = std::sqrt(e);
        double r = std::sqrt(1.0 - e);
        b(j, j) = t;
        b(n + j, j) = r;
        b(j, n + j) = -r;
        b(n + j, n + j) = t;
    }
    ComplexMatrix block = ComplexMatrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = u;
    block.bottomRightCorner(n, n).setIdentity();
    return block * b;
}

/// Entrywise |amplitude| * exp(i Arg(ideal)). Not re-unitarized.
inline ComplexMatrix merge_amplitude_phase(const RealMatrix &amplitudes, const ComplexMatrix &ideal) {
    if (amplitudes.rows() != ideal.rows() || amplitudes.cols() != ideal.cols()) {
        throw std::invalid_argument("merge_amplitude_phase: shape mismatch");
    }
    ComplexMatrix out(ideal.rows(), ideal.cols());
    for (Eigen::Index k = 0; k < ideal.rows(); ++k) {
        for (Eigen::Index j = 0; j < ideal.cols(); ++j) {
            double a = amplitudes(k, j);
            if (a < 0.0) {
                throw std::invalid_argument("merge_amplitude_phase: negative amplitude");
            }
            out(k, j) = std::polar(a, std::arg(ideal(k, j)));
        }
    }
    return out;
}

struct AmplitudeReconstruction {
    /// Relative |U_{kj}|^2, doubly stochastic.
    RealMatrix intensities;
    /// Per-output relative transmissivity T_k, scaled so the largest is 1.
    RealVector output_transmissivity;
    /// Per-input relative intensity I_j (same global scale as counts).
    RealVector input_intensity;
    /// max |row sum - 1| of `intensities` after the final sweep.
    double residual = 0.0;
    int iterations = 0;
};

/// Factorizes counts_{kj} ~ T_k |U_{kj}|^2 I_j assuming |U|^2 is doubly
/// stochastic (unitarity). Solved by alternating row/column scaling, which is
/// exact on noiseless data and the maximum-entropy fit otherwise. Entries with
/// mask(k,j) == false are treated as structural zeros.
inline AmplitudeReconstruction reconstruct_amplitudes(const RealMatrix &counts,
                                                      const Eigen::Matrix<bool, -1, -1> *mask = nullptr,
                                                      double tol = 1e-13, int max_iter = 100000) {
    const Eigen::Index n = counts.rows();
    if (counts.cols() != n || n == 0) {
        throw std::invalid_argument("reconstruct_amplitudes: count matrix must be square");
    }
    RealMatrix c = counts;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            bool masked = mask != nullptr && !(*mask)(k, j);
            if (masked) {
                c(k, j) = 0.0;
            } else if (!(c(k, j) > 0.0) || !std::isfinite(c(k, j))) {
                throw std::invalid_argument(
                    "reconstruct_amplitudes: unmasked counts must be positive and finite");
            }
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (c.row(i).sum() <= 0.0 || c.col(i).sum() <= 0.0) {
            throw NumericalError("reconstruct_amplitudes: degenerate count matrix (empty row or column)");
        }
    }
    RealVector row_scale = RealVector::Ones(n);
    RealVector col_scale = RealVector::Ones(n);
    RealMatrix m = c;
    AmplitudeReconstruction out;
    double residual = 1.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        for (Eigen::Index k = 0; k < n; ++k) {
            double s = m.row(k).sum();
            row_scale(k) /= s;
            m.row(k) /= s;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = m.col(j).sum();
            col_scale(j) /= s;
            m.col(j) /= s;
        }
        residual = (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
        if (residual < tol) {
            break;
        }
    }
    if (!(residual < std::max(tol, 1e-8))) {
        throw NumericalError("reconstruct_amplitudes: scaling did not converge (count matrix lacks total support)");
    }
    // counts = diag(1/row_scale) m diag(1/col_scale)
    RealVector t = row_scale.cwiseInverse();
    RealVector in = col_scale.cwiseInverse();
    double tmax = t.maxCoeff();
    out.intensities = m;
    out.output_transmissivity = t / tmax;
    out.input_intensity = in * tmax;
    out.residual = residual;
    out.iterations = it + 1;
    return out;
}

/// Per-column fidelity F_j = (sum_k sqrt(recon_kj ideal_kj))^2.
inline RealVector unitary_fidelity(const RealMatrix &recon, const RealMatrix &ideal, double tol = 1e-6) {
    if (recon.rows() != ideal.rows() || recon.cols() != ideal.cols()) {
        throw std::invalid_argument("unitary_fidelity: shape mismatch");
    }
    RealVector f(recon.cols());
    for (Eigen::Index j = 0; j < recon.cols(); ++j) {
        if (std::abs(recon.col(j).sum() - 1.0) > tol || std::abs(ideal.col(j).sum() - 1.0) > tol) {
            throw std::invalid_argument("unitary_fidelity: columns must sum to 1");
        }
        double s = 0.0;
        for (Eigen::Index k = 0; k < recon.rows(); ++k) {
            s += std::sqrt(std::max(0.0, recon(k, j)) * std::max(0.0, ideal(k, j)));
        }
        f(j) = s * s;
    }
    return f;
}

}  // namespace suplaw
