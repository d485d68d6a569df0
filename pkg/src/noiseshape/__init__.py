"""Noise-shaping quantization for frame expansions.

Quantizers trade per-sample precision for shaped error that alternative dual
frames can suppress; the package covers the quantizers themselves, the duals
and their error certificates, compressed sensing decoders fed by shaped
measurements, a periodic bandlimited sampling testbed, and a reproducible
experiment harness with a CLI.
"""

from .errors import ConfigError, NumericalError
from .noise_shaping import (
    Alphabet,
    QuantizationResult,
    TransferOperator,
    greedy_quantize,
    msq_quantize,
    stability_margin,
)
from .frames import (
    Frame,
    bound_inf_to_2,
    canonical_dual,
    frame_variation,
    generate_frame,
    norm_2_to_2,
    norm_inf_to_2_exact,
    norm_inf_to_inf,
    norm_l21,
    pinv_full_rank,
    sigma_min,
)
from .duals import (
    Condensation,
    DualFrame,
    ErrorCertificate,
    beta_condensation,
    beta_entry_variance,
    canonical_dual_frame,
    certificate_hinv,
    certificate_vdual,
    condense_with_inverse,
    hinv_dual,
    jl_condense,
    reconstruct,
    v_dual,
)
from .compressive import (
    DecodeResult,
    DecoderSpec,
    OneStageResult,
    SparseSignal,
    TwoStageResult,
    best_k_term_l1,
    decode,
    gen_compressible,
    gen_sparse,
    one_stage_condensed_reconstruct,
    rip_constant_bruteforce,
    two_stage_reconstruct,
)
from .adc import (
    PeriodicSignal,
    ReconstructionKernel,
    build_kernel,
    circular_diff,
    inband_fraction,
    kernel_derivative_l1,
    noise_spectrum,
    random_bandlimited,
    reconstruct as adc_reconstruct,
    sample,
    sample_count,
    sup_error_bound,
    sup_error_bound_asymptotic,
    surrogate_error_stream,
)
from .harness import (
    EXPERIMENT_KINDS,
    ExperimentConfig,
    ExperimentRecord,
    FitResult,
    adc_spectrum_table,
    census_pass_rate,
    default_config,
    fit_slope,
    run_experiment,
    singular_value_census,
    splitmix64,
    sub_seed,
)

__version__ = "0.1.0"
