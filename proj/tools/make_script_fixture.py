#!/usr/bin/env python3
# Copyright 2026 The Asymsim Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/fixtures/script.json from the bundled tasks.

Script fixtures are keyed by prompt hash, so they must be rebuilt whenever
the script prompt or the task file changes.

    python3 tools/make_script_fixture.py build/tools/asymsim
"""

import hashlib
import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

SCRIPTS = {
    "mutualfriends-donovan-benjamin": """\
Donovan Reeves said: "Hi, I'm Donovan. Great party, isn't it?"
Benjamin Jackson said: "It is. I'm Benjamin. How do you know the host?"
Donovan Reeves said: "We met at a coding competition a while back. What about you?"
Benjamin Jackson [non-verbal communication] smiled
Benjamin Jackson said: "Through work friends. Do you know anyone into shooting sports?"
Donovan Reeves said: "Actually yes, my friend Jacob at Maxim Integrated."
Benjamin Jackson said: "Jacob from Maxim Integrated? I know him too!"
Donovan Reeves [action] raised his glass
Benjamin Jackson left the conversation
""",
    "craigslist-bike": """\
Samuel Anderson said: "Hi Mia, is the road bike still available?"
Mia Davis said: "It is. It's in great shape, I'm asking $450."
Samuel Anderson said: "Would you take $300? I can pick it up today."
Mia Davis said: "That's too low. I could do $420."
Samuel Anderson said: "How about $380 in cash?"
Mia Davis [non-verbal communication] nodded
Mia Davis said: "Alright, $400 and it's yours."
Samuel Anderson said: "Deal. I'll bring cash at six."
Mia Davis left the conversation
""",
    "borrow-car": """\
Leo Williams said: "Morning. Any chance I could borrow the car this weekend?"
Naomi Fraser said: "What for? I might need it on Saturday."
Leo Williams said: "Just a site visit for my studio project, back by noon."
Naomi Fraser did nothing
Naomi Fraser said: "Fine, but please fill the tank."
Leo Williams [action] handed her a coffee
Leo Williams left the conversation
""",
}


def main() -> None:
    binary = sys.argv[1] if len(sys.argv) > 1 else str(ROOT / "build/tools/asymsim")
    tasks = json.loads((ROOT / "data/tasks.json").read_text())
    replies = {}
    for task in tasks:
        out = subprocess.run(
            [binary, "dump-prompt", "--tasks", str(ROOT / "data/tasks.json"),
             "--task", task["id"], "--mode", "script"],
            check=True, capture_output=True, text=True).stdout
        prompt = out[:-1]  # dump-prompt appends a newline
        replies[hashlib.sha256(prompt.encode()).hexdigest()] = SCRIPTS[task["id"]]
    doc = {"mode": "map", "model": "fixture-script", "replies": replies}
    (ROOT / "data/fixtures/script.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
