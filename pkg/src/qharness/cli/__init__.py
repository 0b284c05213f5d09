# CLI package for qharness
