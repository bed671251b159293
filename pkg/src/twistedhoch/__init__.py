"""twistedhoch: exact workbench for Hochschild cohomology, brace algebras,
and twisted tensor products of dg categories."""

__version__ = "0.1.0"
