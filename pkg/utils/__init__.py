# utils: shared helpers (seeding, atomic output, reporting).
