__version__ = "0.1.0"

from .geometry import PlaneVector, build_staircase, normalizing_matrix, veech_generators
from .section import SectionComponent, SectionPoint, build_partition, classify, return_time
from .distribution import cdf, covolume, pdf, sample_distribution, slope_gap_distribution
from .nondiff import count_nondiff, crossing_stamps
from .enumeration import empirical_vs_analytic, orbit_enumerate, slope_gaps
