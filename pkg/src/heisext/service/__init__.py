"""Service layer: pydantic models, handlers, and the FastAPI app."""
