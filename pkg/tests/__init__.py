"""Test package for qsc_ldpc."""
