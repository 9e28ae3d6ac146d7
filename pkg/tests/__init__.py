# Singular Drift Lab Tests
