"""Four-agent critical-thinking prompting pipeline, five-stage writing
tutor, and a desk-scale benchmark evaluation harness."""

from .gateway import (
    AuthError,
    Backend,
    BackendUsage,
    ChatMessage,
    GatewayError,
    GenerationRequest,
    GenerationResult,
    HttpBackend,
    KeyedResponse,
    MalformedResponse,
    RateLimited,
    Role,
    ScriptedBackend,
    TransportError,
    backend_usage,
    make_scripted_backend,
)
from .catalog import PersonaFields, PromptCatalog, default_catalog, render_persona
from .pipeline import (
    AgentId,
    PipelineConfig,
    PipelineError,
    PipelineKind,
    StepRecord,
    Transcript,
    load_transcript,
    run_pipeline,
    run_raw_critique_wrapper,
    serialize_transcript,
)
from .wordnet import LexiconIndex, Synset, UsageBundle, load_wordnet_dir, lookup, parse_wndb
from .tutor import (
    AssessmentFeedback,
    LearnerProfile,
    SessionState,
    SessionStore,
    Stage,
    TopicBundle,
    TurnInput,
    TutorPipeline,
    VocabExplanation,
)
from .datasets import Dataset, GenItem, MCItem, load_gen_dataset, load_mc_dataset
from .scoring import (
    Lexicon,
    ScoreMode,
    extract_mc_choice,
    load_lexicon,
    score_exact_or_judge,
    score_lexicon,
    score_mc,
)
from .reliability import anova_f, cohen_kappa, cronbach_alpha
from .harness import ReportFormat, ScoreReport, render_report, run_eval

__version__ = "0.1.0"
