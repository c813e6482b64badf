import random

import pytest

from molbench.chem import parse_smiles
from molbench.datasets import BUILTIN_TASKS, MoleculeRecord, TaskSpec
from molbench.errors import InsufficientExamples, MissingTemplate, UnknownPlaceholder
from molbench.fingerprint import SimilarityIndex, morgan_fingerprint, top_k_similar
from molbench.prompts import (
    COT,
    ICL,
    SELFIES_REPR,
    SMILES_REPR,
    ZERO_SHOT,
    PromptMode,
    PromptRecord,
    build_prompt,
    build_prompts,
    format_answer,
    read_prompts,
    render_template,
    verify_templates,
    write_prompts,
)

BACE = BUILTIN_TASKS["bace"]
ESOL = BUILTIN_TASKS["esol"]


def _record(mol_id, smiles, labels):
    from molbench.chem import encode_selfies, write_canonical_smiles

    graph = parse_smiles(smiles)
    return MoleculeRecord(
        id=mol_id,
        smiles=smiles,
        selfies=encode_selfies(graph),
        canonical=write_canonical_smiles(graph),
        labels=labels,
        image_path=f"img/{mol_id}.png",
    )


def _train_set(n=12):
    smiles_pool = [
        "CCO", "CCN", "CCC", "CCCC", "CCOC", "CC(C)O",
        "c1ccccc1", "Cc1ccccc1", "CCc1ccccc1", "OCCO", "NCCN", "CC(=O)O",
    ]
    return [_record(i, smiles_pool[i % len(smiles_pool)], (i % 2,)) for i in range(n)]


def test_templates_checksums_intact():
    assert verify_templates() == []


def test_zero_shot_has_no_instruction_or_examples():
    train = _train_set()
    prompt = build_prompt(_record(100, "CCO", (1,)), BACE, PromptMode(ZERO_SHOT),
                          SMILES_REPR, {r.id: r for r in train}, None)
    assert "Task:" not in prompt.text
    assert "Example" not in prompt.text
    assert prompt.example_ids == ()
    assert "CCO" in prompt.text


def test_icl0_keeps_instruction_without_examples():
    prompt = build_prompt(_record(100, "CCO", (1,)), BACE, PromptMode(ICL, 0),
                          SMILES_REPR, {}, None)
    assert "Task:" in prompt.text
    assert "Example" not in prompt.text


def test_icl2_examples_match_similarity_oracle():
    train = _train_set()
    target = _record(100, "CCOC(C)C", (1,))
    prompts = build_prompts([target], BACE, PromptMode(ICL, 2), SMILES_REPR, train)
    index = SimilarityIndex(2048, 2)
    for record in train:
        index.add(record.id, morgan_fingerprint(parse_smiles(record.canonical),
                                                source_id=record.id))
    query = morgan_fingerprint(parse_smiles(target.canonical), source_id=target.id)
    expected = [mol_id for mol_id, _ in top_k_similar(query, index, 2)]
    assert list(prompts[0].example_ids) == expected
    assert prompts[0].target_id not in prompts[0].example_ids


def test_example_block_contains_gold_answers():
    train = _train_set(4)
    target = _record(100, "CCO", (1,))
    prompt = build_prompt(target, BACE, PromptMode(ICL, 2), SMILES_REPR,
                          {r.id: r for r in train}, _index_of(train))
    assert prompt.text.count("Answer:") == 2
    assert "Example 1:" in prompt.text and "Example 2:" in prompt.text


def _index_of(train):
    index = SimilarityIndex(2048, 2)
    for record in train:
        index.add(record.id, morgan_fingerprint(parse_smiles(record.canonical),
                                                source_id=record.id))
    return index


def test_insufficient_examples():
    train = _train_set(1)
    with pytest.raises(InsufficientExamples):
        build_prompt(_record(100, "CCO", (1,)), BACE, PromptMode(ICL, 3),
                     SMILES_REPR, {r.id: r for r in train}, _index_of(train))


def test_canonical_equal_train_neighbors_rank_first():
    """Train records isomorphic to the target (different ids) are allowed and
    fill the top slots at score 1.0, ids ascending; only the identical id is
    excluded."""
    train = _train_set(6) + [_record(50, "OCC", (1,))]  # id 0 is CCO, 50 is OCC
    target = _record(100, "CCO", (1,))
    prompt = build_prompt(target, BACE, PromptMode(ICL, 2), SMILES_REPR,
                          {r.id: r for r in train}, _index_of(train))
    assert list(prompt.example_ids) == [0, 50]


def test_bace_question_ends_with_yes_no():
    prompt = build_prompt(_record(1, "CCO", (1,)), BACE, PromptMode(ZERO_SHOT),
                          SMILES_REPR, {}, None)
    assert prompt.text.rstrip().endswith("Answer Yes or No.")


def test_esol_requests_log_solubility():
    prompt = build_prompt(_record(1, "CCO", (-0.77,)), ESOL, PromptMode(ICL, 0),
                          SMILES_REPR, {}, None)
    assert "log solubility in mols per litre" in prompt.text


def test_unknown_placeholder_for_wrong_representation(tmp_path, monkeypatch):
    import molbench.prompts.templates as templates_mod

    def fake_load(dataset, section):
        return "molecule as {selfies}"

    monkeypatch.setattr(templates_mod, "load_template", fake_load)
    monkeypatch.setattr("molbench.prompts.build.load_template", fake_load)
    with pytest.raises(UnknownPlaceholder):
        render_template(BACE, "question", SMILES_REPR, {"selfies": "x"})


def test_missing_template():
    unknown_task = TaskSpec("mystery", "classification", ("y",))
    with pytest.raises(MissingTemplate):
        render_template(unknown_task, "outline", SMILES_REPR, {})


def test_selfies_representation_embedded():
    target = _record(5, "CCO", (1,))
    prompt = build_prompt(target, BACE, PromptMode(ZERO_SHOT), SELFIES_REPR, {}, None)
    assert "[C][C][O]" in prompt.text
    assert "SELFIES" in prompt.text


def test_format_answer_classification_and_regression():
    assert format_answer(BACE, (1,)) == "Yes"
    assert format_answer(BACE, (0,)) == "No"
    assert format_answer(ESOL, (-3.214159,)) == "-3.21"


def test_format_answer_vector():
    qm9 = BUILTIN_TASKS["qm9"]
    labels = tuple(float(i) for i in range(12))
    text = format_answer(qm9, labels)
    assert text.count("\n") == 11
    assert text.startswith("alpha: 0")


def test_prompt_jsonl_round_trip(tmp_path):
    train = _train_set()
    prompts = build_prompts([_record(100, "CCO", (1,)), _record(101, "CCN", (0,))],
                            BACE, PromptMode(ICL, 2), SMILES_REPR, train)
    path = tmp_path / "prompts.jsonl"
    write_prompts(prompts, path)
    loaded = read_prompts(path)
    assert loaded == prompts


def test_prompt_files_byte_deterministic(tmp_path):
    train = _train_set()
    targets = [_record(100, "CCO", (1,)), _record(101, "CCN", (0,))]
    for name in ("a.jsonl", "b.jsonl"):
        write_prompts(
            build_prompts(targets, BACE, PromptMode(ICL, 2), SMILES_REPR, train),
            tmp_path / name)
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_no_leakage_examples_come_from_train():
    train = _train_set()
    train_ids = {r.id for r in train}
    targets = [_record(100 + i, s, (1,)) for i, s in
               enumerate(["CCOC", "CCCN", "c1ccco1"])]
    prompts = build_prompts(targets, BACE, PromptMode(ICL, 3), SMILES_REPR, train)
    for prompt in prompts:
        assert set(prompt.example_ids) <= train_ids


def test_icl_k_extension_preserves_sections():
    """ICL(k) differs from ICL(k-1) only inside the example block."""
    train = _train_set()
    target = _record(100, "CCO", (1,))
    small = build_prompt(target, BACE, PromptMode(ICL, 1), SMILES_REPR,
                         {r.id: r for r in train}, _index_of(train))
    large = build_prompt(target, BACE, PromptMode(ICL, 2), SMILES_REPR,
                         {r.id: r for r in train}, _index_of(train))
    head_small, _, tail_small = small.text.partition("Examples:")
    head_large, _, tail_large = large.text.partition("Examples:")
    assert head_small == head_large
    question_small = tail_small.split("\n\n")[-1]
    question_large = tail_large.split("\n\n")[-1]
    assert question_small == question_large


def test_cot_includes_reasoning_block():
    train = _train_set()
    prompt = build_prompt(_record(100, "CCO", (1,)), BACE, PromptMode(COT, 2),
                          SMILES_REPR, {r.id: r for r in train}, _index_of(train))
    assert "step" in prompt.text.lower()
    assert "Worked example" in prompt.text


def test_all_builtin_tasks_have_templates():
    for name, task in BUILTIN_TASKS.items():
        prompt = build_prompt(_record(1, "CCO", _labels_for(task)), task,
                              PromptMode(ZERO_SHOT), SMILES_REPR, {}, None)
        assert prompt.text


def _labels_for(task):
    if task.kind == "classification":
        return (1,)
    if task.kind == "regression":
        return (1.0,)
    if task.kind == "multi_regression":
        return tuple(float(i) for i in range(12))
    return ("an example description",)
