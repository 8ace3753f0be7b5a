"""
Subcommand and flag schemas for the compact3 CLI.

SHARED_FLAGS — run-wide settings, accepted by every subcommand
COMMANDS     — one entry per subcommand: name, description, own arguments

Each argument entry is {"flags": [...], "help": ..., plus optional argparse
keywords: type, default, choices, action, nargs, required}. Type names are
strings resolved by main.py, so this module stays data only.
"""

# Flags map 1:1 onto RunConfig fields (dest); None defaults mean "keep the
# value from .env / COMPACT3_* / the dataclass default".
SHARED_FLAGS = [
    {"flags": ["--digits"], "dest": "digits", "type": "int",
     "help": "decimal digits of working precision (>= 30)"},
    {"flags": ["--jobs"], "dest": "jobs", "type": "int",
     "help": "worker processes"},
    {"flags": ["--out"], "dest": "out_dir",
     "help": "output directory for artifacts"},
    {"flags": ["--format"], "dest": "fmt", "choices": ["json", "csv"],
     "help": "dataset and catalog format"},
    {"flags": ["--budget-nodes"], "dest": "budget_nodes", "type": "int",
     "help": "gamma-search node budget"},
    {"flags": ["--term-cap"], "dest": "term_cap", "type": "int",
     "help": "largest intermediate polynomial (terms) detrig may build"},
    {"flags": ["--tolerance"], "dest": "tolerance",
     "help": "gamma-search acceptance tolerance, decimal string"},
    {"flags": ["--seed"], "dest": "seed", "type": "int",
     "help": "seed for randomised checks"},
    {"flags": ["--log-level"], "dest": "log_level",
     "choices": ["DEBUG", "INFO", "WARNING", "ERROR"],
     "help": "stderr log level"},
]

_TUPLE = {"type": "tuple", "help": "angle count, e.g. 0,0,0,1,1,3"}

COMMANDS = [
    {
        "name": "enumerate-s",
        "description": "Enumerate the snec tuples (small-circle coronas).",
        "arguments": [
            {"flags": ["--total-cap"], "type": "int", "default": 5,
             "help": "largest coordinate sum scanned"},
        ],
    },
    {
        "name": "enumerate-k",
        "description": "Enumerate K, the candidate (eta, zeta) pairs.",
        "arguments": [
            {"flags": ["--zeta3-cap"], "type": "int", "default": 34,
             "help": "largest third coordinate of zeta scanned"},
        ],
    },
    {
        "name": "intercepts",
        "description": (
            "Intercept the 2pi-contours of every candidate pair and group the "
            "found points; ambiguous pairs go through exact tie-breaking."
        ),
        "arguments": [
            {"flags": ["--pairs"], "default": "examples",
             "help": "'examples' (or 'examples9'), 'K', or a pairs file written by enumerate-k"},
            {"flags": ["--no-resolve"], "action": "store_true",
             "help": "skip exact tie-breaking, report numeric results only"},
        ],
    },
    {
        "name": "profile",
        "description": "Contour profile and predicate table of one tuple.",
        "arguments": [
            {"flags": ["kind"], "choices": ["alpha", "beta"], "help": "contour family"},
            {"flags": ["xi"], **_TUPLE},
            {"flags": ["--samples"], "type": "int", "default": 0,
             "help": "also trace the contour at this many abscissae"},
        ],
    },
    {
        "name": "detrig",
        "description": "Integer polynomial of the contour xi . kind = 2pi.",
        "arguments": [
            {"flags": ["kind"], "choices": ["alpha", "beta", "gamma"], "help": "angle family"},
            {"flags": ["xi"], **_TUPLE},
        ],
    },
    {
        "name": "eliminate",
        "description": "Resultant of the eta- and zeta-contour polynomials.",
        "arguments": [
            {"flags": ["eta"], **_TUPLE},
            {"flags": ["zeta"], **_TUPLE},
            {"flags": ["--var"], "choices": ["r", "s"], "default": "s",
             "help": "variable to eliminate"},
        ],
    },
    {
        "name": "certify",
        "description": "Exact values (polynomials + isolating intervals) of one intercept.",
        "arguments": [
            {"flags": ["eta"], **_TUPLE},
            {"flags": ["zeta"], **_TUPLE},
        ],
    },
    {
        "name": "gamma-search",
        "description": "Find every onec tuple xi with xi . gamma(r, s) = 2pi.",
        "arguments": [
            {"flags": ["--r"], "help": "mid radius, decimal string"},
            {"flags": ["--s"], "help": "small radius, decimal string"},
            {"flags": ["--certificate"], "help": "read r and s from a certificate file"},
            {"flags": ["--confirm"], "action": "store_true",
             "help": "confirm each tuple exactly against the certificate"},
        ],
    },
    {
        "name": "corona",
        "description": "Place the corona a tuple decodes to around one circle.",
        "arguments": [
            {"flags": ["centre"], "choices": ["large", "mid", "small"], "help": "centre circle"},
            {"flags": ["xi"], **_TUPLE},
            {"flags": ["--r"], "required": True, "help": "mid radius"},
            {"flags": ["--s"], "required": True, "help": "small radius"},
        ],
    },
    {
        "name": "grow",
        "description": "Grow a patch from a worked example's seed corona.",
        "arguments": [
            {"flags": ["example"], "help": "example-1 .. example-5"},
            {"flags": ["--size"], "type": "float", "default": 3.0,
             "help": "half-width of the square region to fill"},
            {"flags": ["--max-circles"], "type": "int", "default": 5000,
             "help": "stop after this many circles"},
        ],
    },
    {
        "name": "verify",
        "description": "Check a packing file for overlaps and compactness.",
        "arguments": [
            {"flags": ["packing"], "help": "packing JSON file"},
        ],
    },
    {
        "name": "render",
        "description": "Render a packing file as SVG.",
        "arguments": [
            {"flags": ["packing"], "help": "packing JSON file"},
            {"flags": ["--tangency"], "action": "store_true",
             "help": "draw a segment for every tangency"},
        ],
    },
    {
        "name": "reproduce",
        "description": "Run the published checks and print a summary table.",
        "arguments": [
            {"flags": ["--heavy"], "action": "store_true",
             "help": "also run the near-origin elimination and the full L computation"},
        ],
    },
]

COMMAND_NAMES = [c["name"] for c in COMMANDS]
