"""Integration tests for qsc_ldpc: full-length construction and BER runs."""
