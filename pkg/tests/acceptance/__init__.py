"""Long statistical checks of the forecaster and the benchmark systems."""
