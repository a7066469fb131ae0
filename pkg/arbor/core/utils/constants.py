"""
Arbor Constants.

Repository-wide constants: default horizons and windows used when deciding "eventually" claims at a finite horizon,
the documented random number generator, the exit-code contract of the CLI, and help texts shared by commands.

Constants:
    - RNG_ALGORITHM: Name of the bit generator behind every seeded draw.
    - EXACT_ANTICHAIN_LIMIT: Largest node count for which the exact antichain oracle runs.
    - EVENTUALLY_FRACTION: Fraction of an observed sequence treated as its "eventual" tail.
    - STABILIZATION_FRACTION: Fraction of construction stages in which markers must be at rest.
    - DEFAULT_STREAM_DEPTH: Longest string explored when streaming a branching set.
    - WORKERS_ENV_VAR: Environment variable overriding the bench pool size.

Classes:
    - ExitCode: Process exit codes of the CLI.
    - ReportFormat: Output formats for machine-readable reports.
"""

from enum import Enum, IntEnum

RNG_ALGORITHM = "PCG64"

EXACT_ANTICHAIN_LIMIT = 24

EVENTUALLY_FRACTION = 1 / 3

STABILIZATION_FRACTION = 1 / 4

DEFAULT_STREAM_DEPTH = 40

DEFAULT_FAMILY_DEPTH = 12

DEFAULT_ROUNDS = 6

MIN_BENCH_TRIALS = 100

WORKERS_ENV_VAR = "WORKBENCH_WORKERS"

SEED_HELP = "Base seed for every random draw. Trial i of a bench uses seed base + i."

HORIZON_HELP = "Horizon (number of stages or naturals) for generated instances."

OUT_HELP = "Output directory. Files are named after the command that produced them."


class ExitCode(IntEnum):
    """
    Process exit codes.

    Attributes:
        - SUCCESS: The command completed and every check passed.
        - VERIFICATION_FAILURE: A solution or soundness check failed.
        - USAGE_ERROR: Bad arguments, unknown names or unparsable files.
        - LIMITATION: A horizon or certificate limitation prevented an answer.
    """

    SUCCESS = 0
    VERIFICATION_FAILURE = 1
    USAGE_ERROR = 2
    LIMITATION = 3


class ReportFormat(str, Enum):
    """
    Machine-readable report formats.
    """

    json = "json"
    csv = "csv"
