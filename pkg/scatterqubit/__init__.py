"""
scatterqubit: off-resonant light-scattering decoherence of a two-level ion qubit.

Sub-packages:
- atomic      strong-field level structure and dipole ratios
- scattering  Kramers-Heisenberg amplitudes, rates, light shifts
- dynamics    density-matrix propagation, pulse sequences, quantum jumps
- experiment  detuning sweeps, rate fits, power-law fits
- cli         run configuration and the `scatterqubit` command
"""

__version__ = "0.1.0"
