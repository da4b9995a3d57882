"""Binary LDPC coding for the q-ary symmetric channel."""
__version__ = "0.1.0"
