"""Exact arithmetic in ``Z_p[zeta_{p^k}]`` modulo a fixed power of ``p``."""

from .context import DEFAULT_PREC, PadicContext, PrecisionError, Valuation, vp
from .cyclo import CycloElt, format_literal, p_over_pi_e, parse_literal
from .matrix import CMatrix, residue_rank, unit_inverse
from .series import (BinomialSeries, angle_int, angle_power, binomial_series,
                     hensel_sqrt, hensel_sqrt_int, padic_exp, padic_exp_int,
                     padic_log, padic_log_int, teichmuller, teichmuller_int)
from .characters import (Classical, DirichletCharacter, DiskPoint, WeightChar,
                         char_eval, discrete_log, kappa_eval, kappa_series,
                         kappa_value, primitive_root, t_coordinate)


def valuation(x) -> Valuation:
    """Valuation of a :class:`CycloElt`."""
    return x.valuation()


__all__ = [
    "DEFAULT_PREC", "PadicContext", "PrecisionError", "Valuation", "vp",
    "CycloElt", "format_literal", "parse_literal", "p_over_pi_e",
    "CMatrix", "residue_rank", "unit_inverse",
    "BinomialSeries", "angle_int", "angle_power", "binomial_series",
    "hensel_sqrt", "hensel_sqrt_int", "padic_exp", "padic_exp_int",
    "padic_log", "padic_log_int", "teichmuller", "teichmuller_int",
    "Classical", "DirichletCharacter", "DiskPoint", "WeightChar",
    "char_eval", "discrete_log", "kappa_eval", "kappa_series", "kappa_value",
    "primitive_root", "t_coordinate", "valuation",
]
