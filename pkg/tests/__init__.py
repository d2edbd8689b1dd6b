"""Test suite for the Higgs transport lab."""
