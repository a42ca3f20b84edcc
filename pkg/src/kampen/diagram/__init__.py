from .dcel import (
    Builder,
    Cell,
    Diagram,
    DiagramError,
    ValidationReport,
    boundary_word,
    empty_diagram,
    single_cell,
    validate,
)
from .reduce import find_mirror_pairs, is_reduced, reduce_diagram
from .bands import Annulus, Band, LetterClass, band_sides, detect_annuli, trace_bands
from .census import BoundCheck, CountReport, NotReduced, count_report, diameter, skeleton
from .fixtures import annulus_fixtures, mirror_pair
