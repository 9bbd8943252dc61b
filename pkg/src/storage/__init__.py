from src.storage.model_store import ModelFile, RunParams, RunSummary, StoredTree, build_model, load_model, summarize

__all__ = ["ModelFile", "RunParams", "RunSummary", "StoredTree", "build_model", "load_model", "summarize"]
