#include <string_view>

// Generated from assets/demos/default_demos.jsonl; keep the two in sync
// (the drift test compares byte for byte).

namespace lm4opt::templates {

extern const std::string_view kDefaultDemos;
const std::string_view kDefaultDemos = R"__demos__({"problem_description": "Suppose a base station has two categories of services, denoted by $K(\\ell)$ and $K(c)$, where services of $K(\\ell)$ are prioritized over $K(c)$. For any service $k \\in K(\\ell)$, the data demand is denoted by $q_k$ (in bits) and must be met with a latency tolerance (time until data has been fully transmitted) of $\\tau_k$. \nThe target is to maximize the total throughput of $K(c)$ through optimal resource configuration of numerology and frame structure for each service, subject to latency and demand constraints for $K(\\ell)$. You can consider the resource configuration of numerology and frame structure as blocks, and define a candidate set $B$ for blocks and a set of basic units $I$ where each unit i is associated with each block to ensure that the services are non-overlapping. For each $b \\in B$, the achieved throughput on block $b$, if $b$ is assigned to service $k$ ($k \\in K$), is denoted by $r_{{b,k}}$.\n\nThe optimization task is to select the blocks for each service so that the latency and demand\nrequirements for $K(\\ell)$ are met, without overlapping the chosen ones.", "ground_truth_formulation": "\\max_{{x \\in \\{{0,1\\}}}} \\sum_{{k \\in K(c)}} \\sum_{{b \\in B}} r_{{b,k}} x_{{b,k}}\n\\\\ \\text{{s.t.}}\n& \\sum_{{b \\in B}} r_{{b,k}} x_{{b,k}} \\geq q_k, \\quad k \\in K(\\ell) \\\\\n& r_{{b,k}} = 0 \\quad \\text{{if block }} b \\text{{ exceeds the latency }} \\tau_k \\text{{ for service }} k \\in K(\\ell) \\\\\n& \\sum_{{k \\in K}} \\sum_{{b \\in B}} a_{{b,i}} x_{{b,k}} \\leq 1, \\quad i \\in I\nwhere:\n- $x_{{b,k}} \\in \\{{0, 1\\}}$: Whether block $b$ is assigned to service $k$. If $x_{{b,k}} = 1$, block $b$ is assigned to service $k$; otherwise, $x_{{b,k}} = 0$.\n- $a_{{b,i}}$: Whether block $b$ includes basic unit $i$. $a_{{b,i}}=1$ if it includes the basic unit, otherwise 0.\n- $K(\\ell)$: Category of service that has strict latency requirement.\n- $K(c)$: Another category of service that has a specific latency tolerance.\n- $q_k$: Data demand (in bits) for any service $k \\in K(\\ell)$.\n- $\\tau_k$: Latency tolerance for service $k \\in K(\\ell)$.\n- $B$: Set of blocks.\n- $I$: Set of basic units.\n- $r_{{b,k}}$: Achieved throughput on block $b$ if assigned to service $k$.", "candidate_formulation": "\\max \\sum_{k \\in K(c)} \\sum_{b \\in B} r_{b,k} x_{b,k} \\\\ \\text{s.t.} \\\\\n& \\sum_{b \\in B} r_{b,k} x_{b,k} \\geq q_k, \\quad k \\in K(\\ell)\nwhere:\n- $x_{b,k} \\in \\{0,1\\}$: Whether block $b$ is assigned to service $k$.\n- $r_{b,k}$: Throughput of block $b$ for service $k$.\n- $q_k$: Demand of service $k$.", "worked_evaluation_text": "The objective correctly maximizes the throughput of the capacity services and the latency-service demand constraint is present. The non-overlap constraint over basic units and the latency exclusion rule are both missing, so overlapping assignments are admitted. Variables that do appear are defined clearly.\nObjective Function Correctness: 9/10\nConstraint Accuracy: 4/10\nVariable Definitions: 7/10\nOverall Score: 22/40\nOverall Analysis: Correct objective but the missing overlap and latency constraints leave the model incomplete."}
{"problem_description": "A network operator must divide W MHz of spectrum at one base station among a set N of network slices. Allocating one MHz to slice i yields utility u_i and draws power a_i. Every slice i must receive at least its contracted demand d_i but no more than its cap c_i, and the total power drawn across slices cannot exceed the budget P. Find the bandwidth split that maximizes total utility.", "ground_truth_formulation": "\\max \\sum_{i \\in N} u_i x_i \\\\ \\text{s.t.} \\\\\n& \\sum_{i \\in N} x_i \\leq W \\\\\n& x_i \\geq d_i, \\quad i \\in N \\\\\n& x_i \\leq c_i, \\quad i \\in N \\\\\n& \\sum_{i \\in N} a_i x_i \\leq P\nwhere:\n- $x_i$: Bandwidth allocated to slice $i$ (MHz).\n- $u_i$: Utility per unit of bandwidth for slice $i$.\n- $d_i$: Minimum bandwidth demand of slice $i$.\n- $c_i$: Bandwidth cap of slice $i$.\n- $a_i$: Power drawn per unit of bandwidth for slice $i$.\n- $W$: Total bandwidth available at the base station.\n- $P$: Power budget of the base station.\n- $N$: Set of network slices.", "candidate_formulation": "\\max \\sum_{i \\in N} u_i x_i \\\\ \\text{s.t.} \\\\\n& \\sum_{i \\in N} x_i \\leq W \\\\\n& x_i \\geq d_i, \\quad i \\in N \\\\\n& x_i \\leq c_i, \\quad i \\in N \\\\\n& \\sum_{i \\in N} a_i x_i \\leq P\nwhere:\n- $x_i$: Bandwidth allocated to slice $i$ (MHz).\n- $u_i$: Utility per unit of bandwidth for slice $i$.\n- $d_i$: Minimum bandwidth demand of slice $i$.\n- $c_i$: Bandwidth cap of slice $i$.\n- $a_i$: Power drawn per unit of bandwidth for slice $i$.\n- $W$: Total bandwidth available at the base station.\n- $P$: Power budget of the base station.\n- $N$: Set of network slices.", "worked_evaluation_text": "The candidate reproduces the ground truth exactly: the utility objective, the bandwidth, demand, cap and power constraints all match, and every symbol is defined.\nObjective Function Correctness: 10/10\nConstraint Accuracy: 10/10\nVariable Definitions: 10/10\nOverall Score: 40/40\nOverall Analysis: A complete and correct formulation equivalent to the ground truth."}
{"problem_description": "An edge provider places user workloads on a set S of edge servers for a set U of users. Activating server j costs f_j and emits heat h_j; serving user i from server j costs c_ij. Every user must be served by exactly one active server, a server can only carry users while it is active, and the compute demands r_i routed to a server cannot exceed its capacity R_j. At most B servers may be active, an activated server must carry at least m users to be worthwhile, and total heat output is limited by the cooling budget H. Decide which servers to activate and how to assign users so that activation plus serving cost is minimized.", "ground_truth_formulation": "\\min \\sum_{j \\in S} f_j y_j + \\sum_{i \\in U} \\sum_{j \\in S} c_{ij} z_{ij} \\\\ \\text{s.t.} \\\\\n& \\sum_{j \\in S} z_{ij} = 1, \\quad i \\in U \\\\\n& z_{ij} \\leq y_j, \\quad i \\in U, j \\in S \\\\\n& \\sum_{i \\in U} r_i z_{ij} \\leq R_j y_j, \\quad j \\in S \\\\\n& \\sum_{j \\in S} y_j \\leq B \\\\\n& \\sum_{i \\in U} z_{ij} \\geq m y_j, \\quad j \\in S \\\\\n& \\sum_{j \\in S} h_j y_j \\leq H\nwhere:\n- $y_j \\in \\{0,1\\}$: Whether edge server $j$ is activated.\n- $z_{ij} \\in \\{0,1\\}$: Whether user $i$ is served by server $j$.\n- $f_j$: Activation cost of server $j$.\n- $c_{ij}$: Cost of serving user $i$ from server $j$.\n- $r_i$: Compute demand of user $i$.\n- $R_j$: Compute capacity of server $j$.\n- $m$: Minimum number of users an activated server must carry.\n- $h_j$: Heat output of server $j$.\n- $H$: Cooling budget of the site.\n- $B$: Maximum number of servers that may be active.\n- $U$: Set of users.\n- $S$: Set of edge servers.", "candidate_formulation": "\\max \\sum_{j \\in S} f_j y_j \\\\ \\text{s.t.} \\\\\n& \\sum_{j \\in S} z_{ij} = 1, \\quad i \\in U \\\\\n& z_{ij} \\leq y_j, \\quad i \\in U, j \\in S\nwhere:\n- $y_j$: Whether server $j$ is activated.\n- $z_{ij}$: Whether user $i$ is served by server $j$.\n- $f_j$: Activation cost of server $j$.", "worked_evaluation_text": "The objective maximizes activation cost instead of minimizing total cost, which inverts the stated goal and drops the serving-cost term. Assignment and linking constraints are correct, but capacity, budget, minimum-load and cooling constraints are absent. Parameter definitions are sparse.\nObjective Function Correctness: 1/10\nConstraint Accuracy: 4/10\nVariable Definitions: 5/10\nOverall Score: 10/40\nOverall Analysis: Wrong optimization sense and most side constraints missing."}
{"problem_description": "A content provider caches files on a small cell. File f has size s_f and expected hit rate p_f. The cache holds at most C bytes and at most M files. Choose the cached set to maximize the expected hit rate.", "ground_truth_formulation": "\\max \\sum_{f \\in F} p_f x_f \\\\ \\text{s.t.} \\\\\n& \\sum_{f \\in F} s_f x_f \\leq C \\\\\n& \\sum_{f \\in F} x_f \\leq M\nwhere:\n- $x_f \\in \\{0,1\\}$: Whether file $f$ is cached.\n- $p_f$: Expected hit rate of file $f$.\n- $s_f$: Size of file $f$ in bytes.\n- $C$: Cache capacity in bytes.\n- $M$: Maximum number of cached files.\n- $F$: Catalogue of files.", "candidate_formulation": "\\max \\sum_{f \\in F} p_f x_f \\\\ \\text{s.t.} \\\\\n& \\sum_{f \\in F} s_f x_f \\leq C \\\\\n& \\sum_{f \\in F} x_f \\leq M\nwhere:\n- $x_f$: Fraction of file $f$ kept in cache.\n- $p_f$: Popularity of file $f$.", "worked_evaluation_text": "Objective and both knapsack constraints match the ground truth. The decision variable is declared as a continuous fraction rather than a binary indicator, which changes the model class, and several parameters are left undefined.\nObjective Function Correctness: 9/10\nConstraint Accuracy: 9/10\nVariable Definitions: 3/10\nOverall Score: 28/40\nOverall Analysis: Structurally correct but the variable domain is wrong and definitions are incomplete."}
{"problem_description": "A scheduler assigns T compute tasks to K virtual machines. Task t needs w_t cores and each machine k offers W_k cores. Each task runs on exactly one machine. Minimize the number of machines used.", "ground_truth_formulation": "\\min \\sum_{k \\in K} y_k \\\\ \\text{s.t.} \\\\\n& \\sum_{k \\in K} x_{t,k} = 1, \\quad t \\in T \\\\\n& \\sum_{t \\in T} w_t x_{t,k} \\leq W_k y_k, \\quad k \\in K\nwhere:\n- $x_{t,k} \\in \\{0,1\\}$: Whether task $t$ runs on machine $k$.\n- $y_k \\in \\{0,1\\}$: Whether machine $k$ is used.\n- $w_t$: Core demand of task $t$.\n- $W_k$: Core capacity of machine $k$.\n- $T$: Set of tasks.\n- $K$: Set of machines.", "candidate_formulation": "\\min \\sum_{k \\in K} y_k \\\\ \\text{s.t.} \\\\\n& \\sum_{k \\in K} x_{t,k} = 1, \\quad t \\in T \\\\\n& \\sum_{t \\in T} w_t x_{t,k} \\leq W_k y_k, \\quad k \\in K \\\\\n& \\sum_{t \\in T} x_{t,k} \\geq 1, \\quad k \\in K \\\\\n& u_k \\geq 0, \\quad k \\in K\nwhere:\n- $x_{t,k} \\in \\{0,1\\}$: Whether task $t$ runs on machine $k$.\n- $y_k \\in \\{0,1\\}$: Whether machine $k$ is used.\n- $u_k$: Unused auxiliary load variable.\n- $w_t$: Core demand of task $t$.\n- $W_k$: Core capacity of machine $k$.\n- $T$: Set of tasks.\n- $K$: Set of machines.", "worked_evaluation_text": "Objective and the two essential constraints match the ground truth. The candidate additionally forces every machine to carry a task, which is not required and makes the model infeasible for K larger than T, and it introduces an auxiliary variable that is never used.\nObjective Function Correctness: 10/10\nConstraint Accuracy: 6/10\nVariable Definitions: 6/10\nOverall Score: 27/40\nOverall Analysis: Correct core model weakened by an unwarranted constraint and a spurious variable."}
)__demos__";

}  // namespace lm4opt::templates
