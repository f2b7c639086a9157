"""Published 17 x 17 temperature table (n = 16, f = 1, T = 10), as printed to 3 decimals."""

PUBLISHED_TABLE = (
    (10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0),
    (10.0, 10.004, 10.006, 10.007, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.007, 10.006, 10.004, 10.0),
    (10.0, 10.006, 10.009, 10.011, 10.013, 10.013, 10.014, 10.014, 10.014, 10.014, 10.014, 10.013, 10.013, 10.011, 10.009, 10.006, 10.0),
    (10.0, 10.007, 10.011, 10.014, 10.016, 10.016, 10.017, 10.017, 10.017, 10.017, 10.017, 10.016, 10.016, 10.014, 10.011, 10.007, 10.0),
    (10.0, 10.008, 10.013, 10.016, 10.017, 10.018, 10.019, 10.019, 10.019, 10.019, 10.019, 10.018, 10.017, 10.016, 10.013, 10.008, 10.0),
    (10.0, 10.008, 10.013, 10.016, 10.018, 10.019, 10.02, 10.02, 10.02, 10.02, 10.02, 10.019, 10.018, 10.016, 10.013, 10.008, 10.0),
    (10.0, 10.008, 10.014, 10.017, 10.019, 10.02, 10.021, 10.021, 10.021, 10.021, 10.021, 10.02, 10.019, 10.017, 10.014, 10.008, 10.0),
    (10.0, 10.008, 10.014, 10.017, 10.019, 10.02, 10.021, 10.021, 10.021, 10.021, 10.021, 10.02, 10.019, 10.017, 10.014, 10.008, 10.0),
    (10.0, 10.008, 10.014, 10.017, 10.019, 10.02, 10.021, 10.021, 10.021, 10.021, 10.021, 10.02, 10.019, 10.017, 10.014, 10.008, 10.0),
    (10.0, 10.008, 10.014, 10.017, 10.019, 10.02, 10.021, 10.021, 10.021, 10.021, 10.021, 10.02, 10.019, 10.017, 10.014, 10.008, 10.0),
    (10.0, 10.008, 10.014, 10.017, 10.019, 10.02, 10.021, 10.021, 10.021, 10.021, 10.021, 10.02, 10.019, 10.017, 10.014, 10.008, 10.0),
    (10.0, 10.008, 10.013, 10.016, 10.018, 10.019, 10.02, 10.02, 10.02, 10.02, 10.02, 10.019, 10.018, 10.016, 10.013, 10.008, 10.0),
    (10.0, 10.008, 10.013, 10.016, 10.017, 10.018, 10.019, 10.019, 10.019, 10.019, 10.019, 10.018, 10.017, 10.016, 10.013, 10.008, 10.0),
    (10.0, 10.007, 10.011, 10.014, 10.016, 10.016, 10.017, 10.017, 10.017, 10.017, 10.017, 10.016, 10.016, 10.014, 10.011, 10.007, 10.0),
    (10.0, 10.006, 10.009, 10.011, 10.013, 10.013, 10.014, 10.014, 10.014, 10.014, 10.014, 10.013, 10.013, 10.011, 10.009, 10.006, 10.0),
    (10.0, 10.004, 10.006, 10.007, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.008, 10.007, 10.006, 10.004, 10.0),
    (10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0),
)
