"""Reflection-based Haar / generalized Ewens sampling and circular Jacobi kernels."""
