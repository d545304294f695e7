"""
qubitsep estimates the SD/Bures volume of two-qubit states, their probability
of separability, mean entanglement, and the SD areas of the state-space
boundary and of the separable/entangled boundary, by quasi-Monte Carlo
integration over scrambled Halton sequences.
"""

__version__ = "0.1.0"
