"""Quantum-circuit sampling of projection DPPs with exact classical oracles."""
