"""Application layer: sensing, reformulation, solvers, recovery, diagnostics."""
