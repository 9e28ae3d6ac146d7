# Singular Drift Lab - Source
