"""Shared error types for the lexicon databases."""


class DatabaseError(ValueError):
    pass


class NotFoundError(DatabaseError):
    pass


class DuplicateError(DatabaseError):
    pass
