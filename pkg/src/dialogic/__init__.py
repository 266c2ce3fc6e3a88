"""Engine for diagrammatic logics.

Sketches present logics, realizations are the specifications written in them,
free constructions saturate specifications into theories, and inference steps
are fraction compositions certified by entailments.
"""

__version__ = "0.1.0"
