"""AIG optimization engine and synthesis-recipe dataset generator."""

from .aig import Aig, AigError, DesignStats, Lit
from .bench import BenchError, parse_bench, write_bench
from .equiv import EquivReport, exhaustive_equiv, random_sim_equiv
from .graphml import write_graphml
from .pipeline import (
    PipelineError,
    SampleLabel,
    SplitManifest,
    generate_dataset,
    make_splits,
    run_recipe,
)
from .recipe import (
    Recipe,
    RecipeError,
    TransformToken,
    parse_recipe,
    render_recipe,
    sample_recipes,
)
from .transforms import balance, refactor, resubstitute, rewrite

__all__ = [
    "Aig",
    "AigError",
    "BenchError",
    "DesignStats",
    "EquivReport",
    "Lit",
    "PipelineError",
    "Recipe",
    "RecipeError",
    "SampleLabel",
    "SplitManifest",
    "TransformToken",
    "balance",
    "exhaustive_equiv",
    "generate_dataset",
    "make_splits",
    "parse_bench",
    "parse_recipe",
    "random_sim_equiv",
    "refactor",
    "render_recipe",
    "resubstitute",
    "rewrite",
    "run_recipe",
    "sample_recipes",
    "write_bench",
    "write_graphml",
]
__version__ = "0.1.0"
