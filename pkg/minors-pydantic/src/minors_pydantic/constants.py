ARTIFACT_VERSION = "0.1.0"
"""The artifact version written into every result and manifest."""

FAILURE_BUDGET = 0.001
"""Largest tolerated fraction of failed replicas before an experiment is rejected."""

SINE_APPROXIMANT_SIZE = 2000
"""Default matrix size used to approximate sine windows."""

EDGE_APPROXIMANT_SIZE = 1000
"""Default matrix size used to approximate Airy and Bessel windows."""

SINE_WINDOW = 128
"""Default half-width M of a sine window (2M+1 points)."""

AIRY_WINDOW = 12
"""Default number of Airy points kept from the edge."""

BESSEL_WINDOW = 80
"""Default number of Bessel points kept from the hard edge."""
