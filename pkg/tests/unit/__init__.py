"""Unit tests for qsc_ldpc."""
