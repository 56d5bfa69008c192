"""Central constants for procsym (Python 3.12)."""

# Letters are bitmasks in a single machine word
MAX_K = 62

# Process exit codes
EXIT_CODE_SYMMETRIC = 0
EXIT_CODE_NOT_SYMMETRIC = 1
EXIT_CODE_USAGE = 2

# Configuration defaults
DEFAULT_CONFIG_PATH = "/etc/procsym.conf"
DEFAULT_SEED = 0
DEFAULT_TRIALS = 3
DEFAULT_SYMBOLIC_MAX_K = 4
DEFAULT_FRONTIER_CAP = 10**6
DEFAULT_REPORT_FORMAT = "jsonl"
REPORT_FORMATS = ("jsonl", "text")

# Randomized Parikh mode draws evaluation points from [LOW, HIGH]
RANDOM_POINT_LOW = 1
RANDOM_POINT_HIGH = 2**31

# Report / manifest schemas
REPORT_SCHEMA = "procsym-report"
REPORT_VERSION = 1
MANIFEST_SCHEMA = "procsym-manifest"
MANIFEST_VERSION = 1

# Reserved names for states added by automaton constructions
SINK_STATE = "q_bot"
