"""Weighted projective polynomial systems over exact fields."""
from .membership import DegreeError, Membership, graded_membership
from .parser import ParseError, parse
from .poly import Ambient, Polynomial
from .scan import (PointRecord, ScanError, base_locus, naive_scan, scan_cone_singular, simple_point,
                   stratum_transverse)
from .system import PolynomialSystem, load_system, parse_system
