//! Plain-language statements of what each experiment certifies.

use crate::config::ExperimentKind;

pub fn describe(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::AlgebraCheck => {
            "Soundness of the twisted group algebra: associativity of the twisted \
             convolution, the C*-identity under the regular-representation norm, the \
             commutation relation between generating unitaries, the untwisted Fourier \
             oracle for the norm, and the dimension of the center (1 means the fuzzy \
             torus is a full matrix algebra)."
        }
        ExperimentKind::TheoremMain => {
            "Quantitative convergence of fuzzy tori to the quantum torus: per level, \
             the covering radius of the torsion subgroup, the pointwise gap of the \
             twist to its limit, the kernel-cutoff certificate delta_n bounding the \
             distance from the fuzzy torus to a fixed finite-dimensional coefficient \
             space, and certified pairwise quantum Gromov-Hausdorff upper bounds \
             between consecutive levels."
        }
        ExperimentKind::Annex => {
            "Matrix approximation of an arbitrary finite metric space: the dual \
             state-space distances of the bridged Lip-norms, evaluated by linear \
             programming with two-sided polygon brackets, certify that matrix \
             algebras approximate C(X) to within epsilon; sampled states validate \
             the constructive per-state maps and the Lipschitz-dual recovers the \
             input distances."
        }
        ExperimentKind::Collapse => {
            "Dimensional collapse: as the length family degenerates on a coordinate \
             block, the fuzzy torus converges to the fixed-point algebra of the \
             block's dual action (a lower-dimensional fuzzy torus), with the exact \
             averaged-length certificate I_n and the two contraction inequalities \
             verified on random elements."
        }
        ExperimentKind::OddScheme => {
            "Composite plan for odd-dimensional tori: a collapse certificate from one \
             dimension higher combined with a full-matrix-algebra approximation of \
             the even-dimensional torus, each half within epsilon/2, summed by the \
             triangle inequality."
        }
        ExperimentKind::Riemann => {
            "Convergence of subgroup averages to the Haar integral: the gap between \
             the mean over the torsion subgroup and the certified quadrature value \
             of the integral, decreasing along the level sequence."
        }
        ExperimentKind::NormField => {
            "Continuity of the norm and Lip-norm fields: the quotient images of a \
             fixed lattice element have norms and Lip-norms that settle along the \
             level sequence (Cauchy behavior), compared against the commutative \
             sup-norm oracle when the twist vanishes."
        }
    }
}
