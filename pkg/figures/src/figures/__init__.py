"""Figure rendering for gnplclt harness outputs.

Figures are pure functions of the CSV/JSON inputs: nothing is recomputed,
and a pinned rendering configuration makes reruns byte-identical.
"""

__version__ = "0.1.0"
