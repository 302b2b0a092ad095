"""Input validation: pydantic models and file loaders."""
