"""Characteristic-polynomial spectra of Weyl groups and what they determine."""
from .exact_poly import CycloPoly, IntPoly, cyclo_factor, cyclotomic
from .identify import (
    InconsistentSpectrum,
    identify_by_cases,
    identify_by_search,
    verify_uniqueness,
)
from .invariants import ch_star, m, m_pair, m_prime, springer_ch_star
from .root_data import SemisimpleType, SimpleType, parse_type
from .spectra import Spectrum, spectrum
from .tori_fq import share_tori, torus_orders, weyl_classes

__all__ = [
    "CycloPoly", "IntPoly", "cyclo_factor", "cyclotomic",
    "InconsistentSpectrum", "identify_by_cases", "identify_by_search", "verify_uniqueness",
    "ch_star", "m", "m_pair", "m_prime", "springer_ch_star",
    "SemisimpleType", "SimpleType", "parse_type",
    "Spectrum", "spectrum",
    "share_tori", "torus_orders", "weyl_classes",
]
