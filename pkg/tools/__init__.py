# Tools module for the sparse VAR network toolkit
