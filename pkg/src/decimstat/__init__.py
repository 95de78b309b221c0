"""Statistics-preserving decimation of two-phase microstructure images."""

from .analysis import (
    AutoDecimateResult,
    CorrelationLength,
    EnsembleReport,
    LadderReport,
    auto_decimate,
    correlation_length,
    coarseness_trace,
    deviation,
    deviation_table,
    ensemble_stats,
    global_error,
    ladder_report,
    optimal_steps,
    run_ensemble,
)
from .decimation import (
    DecimationLadder,
    DecimationMethod,
    DivisibilityError,
    build_ladder,
    crop_for_steps,
    decimate_step,
)
from .descriptors import (
    AUTOCOVARIANCE,
    DESCRIPTOR_NAMES,
    LINEAL_PATH,
    PORE_SIZE,
    CoarsenessPoint,
    DescriptorCurve,
    ImageDescriptors,
    autocovariance_curve,
    characterize,
    coarseness,
    lineal_path,
    lineal_path_curve,
    pore_distances,
    pore_size_curve,
    pore_size_histogram,
    specific_interface_area,
    two_point_correlation,
)
from .generators import (
    DiskMaterialSpec,
    DiskRecord,
    LoGMaterialSpec,
    PlacementError,
    generate_log,
    log_kernel,
    place_disks,
    sample_radius_histogram,
)
from .image import (
    BinaryImage,
    FormatError,
    SinglePhaseError,
    load,
    save,
    surface_fraction,
)

__version__ = "0.1.0"
