"""avglab: averaging of almost periodic functions along exponential orbits.

Subpackages
-----------
orbits        certified fractional orbits <alpha^n x> and beta-transformations
equidist      discrepancy, Weyl sums, digit-block statistics
apfunc        periodic / singular / Bohr / Stepanov function classes and means
averaging     orbit averages, convergence traces, invariant-density comparison
diophantine   uniformly discrete sets, non-approximation scans
experiments   named experiment registry behind the avglab CLI
"""

from .orbits import (
    BigFloatMultiplier,
    FractionalOrbit,
    GeneralSequence,
    Multiplier,
    OrbitBudgetError,
    OrbitPrecisionError,
    QuadraticMultiplier,
    RationalMultiplier,
    SeedPoint,
    beta_orbit,
    generate_orbit,
    golden_ratio,
    subsample,
)
from .equidist import (
    BlockFrequencies,
    DiscrepancyReport,
    block_frequencies,
    digit_block_frequencies,
    digit_stream,
    discrepancy_report,
    discrepancy_trace,
    extreme_discrepancy,
    star_discrepancy,
    ud_bound_check,
    weyl_sum,
)
from .apfunc import (
    BohrSeries,
    MeanEstimate,
    PeriodicFunction,
    SingularPeriodic,
    SingularTerm,
    StepanovFunction,
    TrigPolynomial,
    fourier_bohr,
    frac_power,
    mean,
    mollify,
    shift,
    stepanov_norm,
    truncate_bohr,
    truncated_variation,
)
from .averaging import (
    AverageTrace,
    RenyiParryDensity,
    SobolReport,
    birkhoff_average,
    convergence_trace,
    renyi_parry_compare,
    sobol_criterion,
)
from .diophantine import (
    BeattySet,
    FiniteSet,
    Lattice,
    UnionSet,
    cantelli_budget,
    dio_scan,
    dist,
    integers,
)
from .experiments import (
    EXPERIMENTS,
    ConfigError,
    RunResult,
    parse_config,
    run_experiment,
    serialize_config,
)

__version__ = "0.1.0"
