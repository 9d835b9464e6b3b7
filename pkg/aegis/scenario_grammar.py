#
#   Copyright (c) 2026, The aegis developers
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#

## Grammar of one scenario-file line:
##     section.key = value   # optional comment
## Blank and comment-only lines parse to an empty result.

import pyparsing as pp

comment = pp.pythonStyleComment

identifier = pp.Word(pp.alphas, pp.alphanums + '_')
## no whitespace is allowed around the dot
dotted_key = pp.Regex(r'[A-Za-z][A-Za-z0-9_]*\.[A-Za-z][A-Za-z0-9_]*')

equals = pp.Suppress('=')
value_token = pp.Regex(r'[^\s#]+')

assignment = pp.Group(dotted_key.setResultsName('name') + equals
                      + value_token.setResultsName('value')).setResultsName('assignment')

scenario_line = pp.Optional(assignment) + pp.StringEnd()
scenario_line.ignore(comment)

## typed value grammars used when coercing against the schema
integer_value = pp.pyparsing_common.signed_integer + pp.StringEnd()
real_value = pp.pyparsing_common.fnumber + pp.StringEnd()
word_value = identifier + pp.StringEnd()
