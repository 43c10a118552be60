"""Invariants of genus 3 hyperelliptic curves: exact octic invariants and theta-constant modular invariants."""

__version__ = "0.1.0"
