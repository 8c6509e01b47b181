from xtkit.common.config import ConfigTree, ValueKind, config_from_ini, config_get, config_report
from xtkit.common.exceptions import (CapabilityError, ConfigError, FactoryError, MissingKeyError, ParseError,
                                     PatternError, ProjectionError, SizeError, UsageError, XtError)
from xtkit.common.float_cmp import CompareStyle, float_compare, vector_float_compare
from xtkit.common.strings import format_value, parse_matrix, parse_scalar, parse_value, parse_vector
from xtkit.common.timings import ScopedTiming, Timings, scoped_timing, timings
