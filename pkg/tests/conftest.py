import hypothesis

# Reproducible runs: fixed example order, no per-test time budget (some
# property bodies sum thousands of series terms).
hypothesis.settings.register_profile(
    "suite", derandomize=True, deadline=None, max_examples=200)
hypothesis.settings.load_profile("suite")
