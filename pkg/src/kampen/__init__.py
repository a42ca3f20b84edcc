"""Word problem, van Kampen diagrams and filling experiments for the group
G = <t1, t2, a, k | a^ti = a, k^ti = k a>."""

__version__ = "0.1.0"
