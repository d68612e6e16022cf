"""Domain layer: models, exceptions, validators and numerical primitives."""
