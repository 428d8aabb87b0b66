from graphene_ndr.figures.presets import FamilyPreset, FigurePresets, load_presets

__all__ = ["FamilyPreset", "FigurePresets", "load_presets"]
