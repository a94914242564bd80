"""Writes the expected prompt renders for the fixture pair.

The instruction sentences are typed from the published prompt wording rather
than read from assets/, so the goldens stay an independent check. Message
content ends where the last placeholder ends; there is no trailing newline.
"""
import pathlib

OUT = pathlib.Path(__file__).parent / "prompts"
L, R = "‘", "’"

A = ("java", "int add(int a, int b) {\n    return a + b;\n}\n")
B = ("python", "def add(a, b):\n    return a + b")
FIRST = "a method that returns the sum of two integers"
SECOND = "a function that returns the sum of two values"
ANALYSIS = "Both snippets add their two arguments and return the result."


def fence(lang, src):
    if not src.endswith("\n"):
        src += "\n"
    return f"```{lang}\n{src}```"


def pair(text):
    return f"{text}\n\n{fence(*A)}\n\n{fence(*B)}"


cases = {
    "simple": pair(
        "Analyze the following two code snippets and determine whether they are clones, regardless of the "
        f"programming language. Respond with {L}yes{R} if the code snippets are clones or {L}no{R} if not."),
    "improved_simple": pair(
        "Consider the overall structure and logic of the following two codes and determine if the two code "
        f"snippets perform a similar task. Respond with {L}yes{R} if the two codes perform similar tasks or "
        f"{L}no{R} otherwise."),
    "similar_line": pair(
        "Analyze the following two code snippets for code clone detection, regardless of the programming "
        "language. You should first report which lines of code are more similar. Then based on the report, "
        "please answer whether these two codes are a clone pair. The response should be "
        f"{L}yes{R} or {L}no{R}."),
    "reasoning": pair(
        "Provide a detailed reasoning process for detecting code clones in the following two code snippets, "
        "regardless of the programming language. Based on your analysis, respond with "
        f"{L}yes{R} if the code snippets are clones or {L}no{R} if they are not."),
    "integrate": pair(
        "Analyze the following two code snippets to assess their similarity and determine if they are code "
        "clones, regardless of the programming language. Provide a similarity score between 0 and 10, where a "
        "higher score indicates more similarity. Additionally, presents a detailed reasoning process for "
        f"detecting code clones. Conclude by {L}yes{R} if they are clones or {L}no{R} otherwise."),
    "code_similarity": pair(
        "Assess the similarity of the following two code snippets and provide a similarity score between 0 "
        "and 10. A higher score indicates that the two codes are more similar. Output the similarity score."),
    "separate_code.step1.a":
        "Analyze the following code snippet and explain the function of the snippet.\n\n" + fence(*A),
    "separate_code.step1.b":
        "Analyze the following code snippet and explain the function of the snippet.\n\n" + fence(*B),
    "separate_code.step2":
        "Analyze the following functions of two code snippets and determine if they are code clones, "
        "regardless of the programming language. The function of the first code snippet is "
        f"{FIRST} and the function of the second is {SECOND}. Please answer {L}yes{R} if the code snippets are "
        f"clones, regardless of the programming language, or {L}no{R} if they are not.",
    "separate_explanation.step1.integrated": pair(
        "Analyze the following two code snippets to assess their similarity, regardless of the programming "
        "language. Provide a similarity score between 0 and 10, where a higher score indicates more "
        "similarity. Additionally, presents a detailed reasoning process for detecting code clones. "
        "Do not conclude whether the two code snippets are clones."),
    "separate_explanation.step1.similarity": pair(
        "Analyze the following two code snippets for code clone detection, regardless of the programming "
        "language. Report which lines of code are more similar. "
        "Do not conclude whether the two code snippets are clones."),
    "separate_explanation.step1.reasoning": pair(
        "Provide a detailed reasoning process for detecting code clones in the following two code snippets, "
        "regardless of the programming language. Do not conclude whether the two code snippets are clones."),
    "separate_explanation.step1.difference": pair(
        "Analyze the following two code snippets, regardless of the programming language, and describe the "
        "differences between them. Do not conclude whether the two code snippets are clones."),
    "separate_explanation.step2": pair(
        "Analyze the following two code snippets and determine if they are code clones. The Clone "
        "Similarity/Reasoning/Difference Integrated information of the first and the second code is: "
        f"{ANALYSIS} Please respond with {L}yes{R} if the code snippets are clones or {L}no{R} if they are not."),
}

OUT.mkdir(exist_ok=True)
for name, text in cases.items():
    (OUT / f"{name}.txt").write_bytes(text.encode("utf-8"))
print(f"wrote {len(cases)} files")
