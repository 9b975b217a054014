#include "lm4opt/prompts.hpp"

// Prompt template text. These strings are the canonical copies; the files
// under assets/prompts/ mirror them and are checked for drift in the tests.

namespace lm4opt::templates {

const std::string_view kDirect = R"__tpl__(You are an expert in writing mathematical formulations for network resource allocation optimization problems. I will give you a problem description. Your task is to give me a problem formulation that includes the optimization model based on the decision variables, constraints, and objective functions from the problem description.

Your response MUST contain only the problem formulation and equations or mathematical terms MUST be in Latex format. After the objective function and constraints, include decision variable definitions as well. DO NOT add additional text, or explanation before or after it.

Problem description to formulate: )__tpl__";

const std::string_view kFewShot = R"__tpl__(You are an expert in writing mathematical formulations for network resource allocation optimization problems. I will give you a problem description. Your task is to give me a problem formulation that includes the optimization model based on the decision variables, constraints, and objective functions from the problem description.
Your response MUST contain only the problem formulation and equations or mathematical terms MUST be in Latex format. After the objective function and constraints, include decision variable definitions as well. DO NOT add additional text, or explanation before or after it. Here is an example:
----------------------------------
"Suppose a base station has two categories of services, denoted by $K(\ell)$ and $K(c)$, where services of $K(\ell)$ are prioritized over $K(c)$. For any service $k \in K(\ell)$, the data demand is denoted by $q_k$ (in bits) and must be met with a latency tolerance (time until data has been fully transmitted) of $\tau_k$. 
The target is to maximize the total throughput of $K(c)$ through optimal resource configuration of numerology and frame structure for each service, subject to latency and demand constraints for $K(\ell)$. You can consider the resource configuration of numerology and frame structure as blocks, and define a candidate set $B$ for blocks and a set of basic units $I$ where each unit i is associated with each block to ensure that the services are non-overlapping. For each $b \in B$, the achieved throughput on block $b$, if $b$ is assigned to service $k$ ($k \in K$), is denoted by $r_{{b,k}}$.

The optimization task is to select the blocks for each service so that the latency and demand
requirements for $K(\ell)$ are met, without overlapping the chosen ones."
Example Problem Formulation:
\max_{{x \in \{{0,1\}}}} \sum_{{k \in K(c)}} \sum_{{b \in B}} r_{{b,k}} x_{{b,k}}
\\ \text{{s.t.}}
& \sum_{{b \in B}} r_{{b,k}} x_{{b,k}} \geq q_k, \quad k \in K(\ell) \\
& r_{{b,k}} = 0 \quad \text{{if block }} b \text{{ exceeds the latency }} \tau_k \text{{ for service }} k \in K(\ell) \\
& \sum_{{k \in K}} \sum_{{b \in B}} a_{{b,i}} x_{{b,k}} \leq 1, \quad i \in I
where:
- $x_{{b,k}} \in \{{0, 1\}}$: Whether block $b$ is assigned to service $k$. If $x_{{b,k}} = 1$, block $b$ is assigned to service $k$; otherwise, $x_{{b,k}} = 0$.
- $a_{{b,i}}$: Whether block $b$ includes basic unit $i$. $a_{{b,i}}=1$ if it includes the basic unit, otherwise 0.
- $K(\ell)$: Category of service that has strict latency requirement.
- $K(c)$: Another category of service that has a specific latency tolerance.
- $q_k$: Data demand (in bits) for any service $k \in K(\ell)$.
- $\tau_k$: Latency tolerance for service $k \in K(\ell)$.
- $B$: Set of blocks.
- $I$: Set of basic units.
- $r_{{b,k}}$: Achieved throughput on block $b$ if assigned to service $k$.
----------------------------------
Now, apply the same procedure for the following problem description:)__tpl__";

const std::string_view kChainOfThought = R"__tpl__(You are an expert in mathematical optimization modeling for network resource allocation problems. Your task is to formulate optimization problems step by step by following these systematic reasoning stages:
1. Variable Identification:
   - Begin by carefully identifying all decision variables mentioned in the problem description.
   - For each variable, determine its domain (binary, continuous, integer) and define its indices and associated sets.
2. Constraint Analysis:
   - Systematically analyze the problem to identify resource limitations.
   - Note down technical requirements specific to the system.
   - Recognize and categorize system constraints.
3. Objective Function:
   - Identify the primary goal of optimization (maximize or minimize a specific metric).
   - Clearly express this goal as a mathematical formula.
   - Ensure the formulation aligns with the problem's stated objectives.
4. Mathematical Formulation:
   - Present a detailed mathematical representation:
     - Write the complete objective function using LaTeX.
     - List all constraints in LaTeX format.
     - Provide precise definitions for all variables and parameters.
Output Requirements:
- Your response MUST adhere to the following format, strictly using LaTeX for all mathematical
expressions:

\text{{Objective Function:}} & \quad <Objective in LaTeX> \\ 
\text{{s.t.}} \\
\text{{Constraints:}} & \quad <Constraints in LaTeX> \\
  where:
  - <Variable Definitions>
  - <Parameter Definitions>
  
Additional Requirements:
- Do NOT include any explanatory text or additional information outside this format.
- Your response should contain: 1. The objective function in LaTeX format.
2. All constraints in LaTeX format.
3. Complete definitions of variables and parameters.
Follow the format strictly and avoid any deviations. Problem description:)__tpl__";

const std::string_view kRanking = R"__tpl__(You are an expert in formulating and evaluating mathematical optimization problems. Below are two candidate solutions to a problem description.
1. **Read the problem description thoroughly** and carefully examine each candidate solution.
2. Evaluate them against these criteria:
   - **Completeness**: Does it include all necessary decision variables, constraints, and a proper objective function?
   - **Correctness**: Are the expressions coherent, consistent with the problem description, and logically valid?
   - **Clarity**: Is the LaTeX notation and overall structure easy to follow and aligned with standard optimization conventions?
3. **Rank** the solutions:
   - **"Best" (rank=1)**: The most complete, correct, and clear.
   - **"Second_Best" (rank=2)**: Good, but weaker than the best.
4. **Important**:
   - Any candidate (1 or 2) could be best.
   - Do not automatically select Candidate 1 as best.
   - Provide each rank only once (1, 2).
5. At the end, output your final ranking strictly in the JSON format we require (with keys "Best" and "Second_Best").
Problem Description:
Candidate 1:
Candidate 2:
Now, based on your thorough evaluation, provide your final ranking as valid JSON.)__tpl__";

const std::string_view kLameTask = R"__tpl__(You are an expert evaluator of mathematical formulations for network resource allocation optimization problems. You will be given a problem description, a ground truth formulation, and a candidate formulation. Evaluate the candidate formulation by comparing it with the ground truth while considering the context provided by the problem description, across the following criteria:
i. Objective Function Correctness: Is the objective function correctly formulated to match the problem description? (Score out of 10)
ii. Constraint Accuracy: Are the constraints comprehensive and correctly stated? (Score out of 10)
iii. Variable Definitions: Are the decision variables properly defined and utilized? (Score out of 10)
iv. Overall Validity: Does the formulation faithfully represent the problem requirements? (Score out of 40)
Provide a brief justification for each score. Your evaluation MUST end in exactly this format:
Objective Function Correctness: X/10
Constraint Accuracy: Y/10
Variable Definitions: Z/10
Overall Score: W/40
Overall Analysis: [A brief summary of the evaluation])__tpl__";

const std::string_view kCorrectiveRetry = R"__tpl__(Your previous response did not satisfy the required structured output format. Respond again with ONLY a valid JSON object matching the schema below, with no additional text before or after it.)__tpl__";

}  // namespace lm4opt::templates

namespace lm4opt::templates {

std::string_view text(Id id) {
    switch (id) {
        case Id::Direct:
            return kDirect;
        case Id::FewShot:
            return kFewShot;
        case Id::ChainOfThought:
            return kChainOfThought;
        case Id::Ranking:
            return kRanking;
        case Id::LameTask:
            return kLameTask;
        case Id::CorrectiveRetry:
            return kCorrectiveRetry;
    }
    return {};
}

}  // namespace lm4opt::templates
