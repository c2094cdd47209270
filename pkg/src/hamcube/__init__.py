"""Fast binary embeddings of Euclidean point sets.

A double circulant random operator applies in O(n log n) time from
O(n) state; composed with a random dither and the sign map it embeds
points into Hamming space so that code distances estimate Euclidean
distances.  The package provides the operator, the planner that sizes
an embedding for a target accuracy, complexity functionals of point
sets, empirical verification suites, and file formats plus a CLI to
drive the whole pipeline.
"""

from .complexity import (
    ComplexityEstimate,
    PointSet,
    d_star,
    gaussian_mean_width,
    greedy_net,
    k_support_norm,
    k_support_norms,
    localized_width,
    q_k,
)
from .config import Config, load_acceptance, load_config
from .data import (
    GeneratorSpec,
    generate,
    read_codes,
    read_points,
    read_report,
    write_codes,
    write_points,
    write_report,
)
from .operators import (
    DoubleCirculantOperator,
    GaussianDenseOperator,
    IndexSet,
    build_double_circulant,
    build_gaussian,
    load_operator,
)
from .quantize import (
    KAPPA,
    BinaryCode,
    DitherVector,
    EmbeddingPlan,
    PlanInfeasibleError,
    dither_scale_and_net_scale,
    embed_binary,
    embed_points,
    estimate_distance,
    hamming,
    make_dither,
    plan_parameters,
)
from .spectral import circ_convolve, diagonalization_residual, fft, inverse_fft
from .suites import run_suite
from .verify import (
    BenchRow,
    CheckResult,
    RegularityProfile,
    SparseSampler,
    VerificationReport,
    bench_scaling,
    check_block_regularity,
    check_l1_concentration,
    check_rip,
    check_strong_regularity,
    check_well_spread,
    measure_binary_distortion,
    measure_l2l1_distortion,
)

__version__ = "0.1.0"
