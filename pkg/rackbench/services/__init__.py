# Census and fixture services
