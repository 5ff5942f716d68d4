"""riddleforge: build concept-attainment riddles from learning resources.

Pipeline stages: ingest (triples + lookup dictionary), classify (topic
markers vs. common properties via nearest-neighbour search over anonymized
contexts), generate (easy/difficult riddles from templates), validate
(exhaustive solution sets), serve (interactive quiz API).
"""

__version__ = "0.1.0"
