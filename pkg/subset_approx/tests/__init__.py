"""Python tests for subset_approx."""
