"""Characteristic series, Newton and Hodge polygons, and slope-bound checks."""

from .charseries import CharSeries, char_series, determinant, valuation_floors
from .polygon import (PolygonData, check_np_above_hp, elementary_divisor_valuations,
                      hodge_polygon, hodge_polygon_minors, lower_hull, newton_polygon,
                      polygon_above)
from .bounds import (DegreeReport, ProgressionReport, SharpBoundReport, SlopeMultiset,
                     check_sharp_bound, check_theorem_A, connected_component_degrees,
                     improved_bound_slopes, lambda_n, progression_check, theorem_a_polygon)
