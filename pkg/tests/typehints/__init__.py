"""Return types of the public API, checked statically and at runtime."""
