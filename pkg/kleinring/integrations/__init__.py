"""Front ends built on the kleinring engine."""
