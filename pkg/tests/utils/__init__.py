"""Shared test utilities: factories for channel parameters and small codes."""
